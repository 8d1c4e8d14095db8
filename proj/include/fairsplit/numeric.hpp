#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

namespace fairsplit {

using Rational = mpq_class;
using Integer = mpz_class;

// n/d in canonical form; d must be nonzero.
inline Rational ratio(const Integer& n, const Integer& d) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

// Parses `[-+]digits[.digits]` as an exact decimal fraction, or `[-+]p/q`.
Rational parse_rational(std::string_view token);

// Always "p/q", e.g. "0/1", "-3/4".
std::string to_fraction_string(const Rational& r);
std::string to_decimal_string(const Rational& r, int digits = 6);
double to_double(const Rational& r);

// Variable ids encode (layer, index, pre/post). Layer 0 post variables are
// the input nodes, so input j has id j.
using VarId = std::uint32_t;

constexpr VarId make_var(unsigned layer, unsigned index, bool pre = false) {
    return (static_cast<VarId>(layer) << 21) | (static_cast<VarId>(pre) << 20) | index;
}
constexpr unsigned var_layer(VarId v) { return v >> 21; }
constexpr unsigned var_index(VarId v) { return v & ((1u << 20) - 1); }
constexpr bool var_is_pre(VarId v) { return (v >> 20) & 1u; }

std::string var_name(VarId v);

class missing_variable : public std::runtime_error {
public:
    explicit missing_variable(VarId v)
        : std::runtime_error("no value for variable " + var_name(v)), var_(v) {}
    VarId var() const { return var_; }

private:
    VarId var_;
};

struct Interval {
    Rational lo;
    Rational hi;

    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    Rational width() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

using Point = std::map<VarId, Rational>;
using Box = std::map<VarId, Interval>;

/// Affine form `sum coeff_v * v + constant` with no zero coefficients stored.
class LinExpr {
public:
    LinExpr() = default;
    explicit LinExpr(Rational constant) : constant_(std::move(constant)) {}
    static LinExpr var(VarId v, Rational coeff = 1);

    const std::map<VarId, Rational>& coeffs() const { return coeffs_; }
    const Rational& constant() const { return constant_; }
    Rational coeff(VarId v) const;
    bool has(VarId v) const { return coeffs_.count(v) != 0; }
    bool is_constant() const { return coeffs_.empty(); }

    void add_term(VarId v, const Rational& c);
    void add_constant(const Rational& c) { constant_ += c; }
    void set_constant(Rational c) { constant_ = std::move(c); }

    LinExpr& operator+=(const LinExpr& o);
    LinExpr& operator-=(const LinExpr& o);
    LinExpr& operator*=(const Rational& k);
    friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
    friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
    friend LinExpr operator*(LinExpr a, const Rational& k) { return a *= k; }
    LinExpr operator-() const { return *this * Rational(-1); }

    friend bool operator==(const LinExpr&, const LinExpr&) = default;
    std::string to_string() const;

private:
    std::map<VarId, Rational> coeffs_;
    Rational constant_{0};
};

LinExpr substitute(const LinExpr& e, VarId v, const LinExpr& r);
Rational eval(const LinExpr& e, const Point& point);

/// Exact range of an affine form over a box: each variable contributes the
/// endpoint selected by the sign of its coefficient.
Interval interval_of(const LinExpr& e, const Box& box);

enum class Relation { le, lt };

/// `expr <= 0` (or `< 0`), scaled to integer coefficients with gcd 1 over
/// all coefficients including the constant.
class LinIneq {
public:
    LinIneq(LinExpr expr, Relation rel = Relation::le);

    // lhs <= rhs, lhs >= rhs
    static LinIneq le(const LinExpr& lhs, const LinExpr& rhs) { return LinIneq(lhs - rhs); }
    static LinIneq ge(const LinExpr& lhs, const LinExpr& rhs) { return LinIneq(rhs - lhs); }

    const LinExpr& expr() const { return expr_; }
    Relation relation() const { return rel_; }
    bool strict() const { return rel_ == Relation::lt; }

    bool is_constant() const { return expr_.is_constant(); }
    bool is_tautology() const;
    bool is_contradiction() const;
    bool holds_at(const Point& p) const;

    std::string to_string() const;

    friend bool operator==(const LinIneq&, const LinIneq&) = default;
    friend bool operator<(const LinIneq& a, const LinIneq& b);

private:
    LinExpr expr_;
    Relation rel_;
};

int compare(const LinExpr& a, const LinExpr& b);

}  // namespace fairsplit
