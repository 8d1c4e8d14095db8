#include "fairsplit/numeric.hpp"

#include <cctype>
#include <sstream>

namespace fairsplit {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

Rational parse_rational(std::string_view token) {
    std::string_view body = token;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    Rational result;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            throw std::invalid_argument("malformed rational '" + std::string(token) + "'");
        }
        Integer d(std::string(den), 10);
        if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(token) + "'");
        result = Rational(Integer(std::string(num), 10), d);
    } else {
        auto dot = body.find('.');
        auto whole = body.substr(0, dot);
        std::string_view frac = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
        bool ok = dot == std::string_view::npos ? all_digits(whole)
                                                : (all_digits(frac) && (whole.empty() || all_digits(whole)));
        if (!ok) throw std::invalid_argument("malformed number '" + std::string(token) + "'");
        std::string digits = std::string(whole) + std::string(frac);
        Integer den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        result = Rational(Integer(digits, 10), den);
    }
    result.canonicalize();
    if (negative) result = -result;
    return result;
}

std::string to_fraction_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_decimal_string(const Rational& r, int digits) {
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    Rational scaled = abs(r) * scale;
    // round half up on the magnitude
    Integer q = (scaled.get_num() * 2 + scaled.get_den()) / (scaled.get_den() * 2);
    std::string s = q.get_str();
    if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    if (r < 0 && q != 0) s.insert(0, "-");
    return s;
}

double to_double(const Rational& r) { return r.get_d(); }

std::string var_name(VarId v) {
    std::ostringstream os;
    unsigned layer = var_layer(v);
    if (layer == 0) {
        os << "x" << var_index(v);
    } else {
        os << (var_is_pre(v) ? "pre" : "n") << layer << "_" << var_index(v);
    }
    return os.str();
}

LinExpr LinExpr::var(VarId v, Rational coeff) {
    LinExpr e;
    e.add_term(v, coeff);
    return e;
}

Rational LinExpr::coeff(VarId v) const {
    auto it = coeffs_.find(v);
    return it == coeffs_.end() ? Rational(0) : it->second;
}

void LinExpr::add_term(VarId v, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = coeffs_.try_emplace(v, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) coeffs_.erase(it);
    }
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
    for (const auto& [v, c] : o.coeffs_) add_term(v, c);
    constant_ += o.constant_;
    return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
    for (const auto& [v, c] : o.coeffs_) add_term(v, -c);
    constant_ -= o.constant_;
    return *this;
}

LinExpr& LinExpr::operator*=(const Rational& k) {
    if (k == 0) {
        coeffs_.clear();
        constant_ = 0;
        return *this;
    }
    for (auto& [v, c] : coeffs_) c *= k;
    constant_ *= k;
    return *this;
}

std::string LinExpr::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, c] : coeffs_) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        Rational a = abs(c);
        if (a != 1) os << a.get_str() << "*";
        os << var_name(v);
        first = false;
    }
    if (first) {
        os << constant_.get_str();
    } else if (constant_ != 0) {
        os << (constant_ < 0 ? " - " : " + ") << Rational(abs(constant_)).get_str();
    }
    return os.str();
}

LinExpr substitute(const LinExpr& e, VarId v, const LinExpr& r) {
    auto it = e.coeffs().find(v);
    if (it == e.coeffs().end()) return e;
    Rational k = it->second;
    LinExpr out = e;
    out.add_term(v, -k);
    out += r * k;
    return out;
}

Rational eval(const LinExpr& e, const Point& point) {
    Rational acc = e.constant();
    for (const auto& [v, c] : e.coeffs()) {
        auto it = point.find(v);
        if (it == point.end()) throw missing_variable(v);
        acc += c * it->second;
    }
    return acc;
}

Interval interval_of(const LinExpr& e, const Box& box) {
    Interval out{e.constant(), e.constant()};
    for (const auto& [v, c] : e.coeffs()) {
        auto it = box.find(v);
        if (it == box.end()) throw missing_variable(v);
        const Interval& iv = it->second;
        if (c > 0) {
            out.lo += c * iv.lo;
            out.hi += c * iv.hi;
        } else {
            out.lo += c * iv.hi;
            out.hi += c * iv.lo;
        }
    }
    return out;
}

LinIneq::LinIneq(LinExpr expr, Relation rel) : rel_(rel) {
    Integer lcm = expr.constant().get_den();
    for (const auto& [v, c] : expr.coeffs()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    expr *= Rational(lcm);
    Integer g = abs(expr.constant().get_num());
    for (const auto& [v, c] : expr.coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
    if (g > 1) expr *= Rational(1, g);
    if (expr.is_constant()) {
        // Collapse constant rows onto one representative each.
        const Rational& k = expr.constant();
        expr = LinExpr(Rational(sgn(k)));
    }
    expr_ = std::move(expr);
}

bool LinIneq::is_tautology() const {
    if (!is_constant()) return false;
    return strict() ? expr_.constant() < 0 : expr_.constant() <= 0;
}

bool LinIneq::is_contradiction() const { return is_constant() && !is_tautology(); }

bool LinIneq::holds_at(const Point& p) const {
    Rational v = eval(expr_, p);
    return strict() ? v < 0 : v <= 0;
}

std::string LinIneq::to_string() const {
    return expr_.to_string() + (strict() ? " < 0" : " <= 0");
}

int compare(const LinExpr& a, const LinExpr& b) {
    auto ia = a.coeffs().begin();
    auto ib = b.coeffs().begin();
    for (; ia != a.coeffs().end() && ib != b.coeffs().end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
        if (int c = cmp(ia->second, ib->second); c != 0) return c < 0 ? -1 : 1;
    }
    if (ia != a.coeffs().end()) return 1;
    if (ib != b.coeffs().end()) return -1;
    int c = cmp(a.constant(), b.constant());
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

bool operator<(const LinIneq& a, const LinIneq& b) {
    if (int c = compare(a.expr_, b.expr_); c != 0) return c < 0;
    return a.rel_ < b.rel_;
}

}  // namespace fairsplit
