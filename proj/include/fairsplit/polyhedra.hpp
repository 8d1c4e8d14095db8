#pragma once

#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "fairsplit/forward.hpp"
#include "fairsplit/lp.hpp"
#include "fairsplit/model.hpp"
#include "fairsplit/numeric.hpp"

namespace fairsplit {

class unbounded_error : public std::runtime_error {
public:
    explicit unbounded_error(VarId v) : std::runtime_error("polyhedron is unbounded along " + var_name(v)) {}
};

/// Conjunction of canonical linear inequalities over a variable scope.
/// A contradictory constant row is kept as the single marker `1 <= 0`.
class Polyhedron {
public:
    Polyhedron() = default;
    explicit Polyhedron(std::set<VarId> scope) : scope_(std::move(scope)) {}
    static Polyhedron from_box(const Box& box);

    const std::set<VarId>& scope() const { return scope_; }
    const std::set<LinIneq>& constraints() const { return ineqs_; }
    std::vector<LinIneq> constraint_list() const { return {ineqs_.begin(), ineqs_.end()}; }
    std::size_t size() const { return ineqs_.size(); }

    // Adds a row; its variables join the scope.
    void add(const LinIneq& c);
    void add_scope(VarId v) { scope_.insert(v); }
    void drop_scope(VarId v) { scope_.erase(v); }

    bool trivially_empty() const { return contradiction_; }
    bool is_empty() const;
    std::optional<Point> witness() const;
    bool contains(const Point& p) const;
    Box bounding_box() const;

    friend bool operator==(const Polyhedron&, const Polyhedron&) = default;
    friend bool operator<(const Polyhedron& a, const Polyhedron& b) { return a.ineqs_ < b.ineqs_; }

private:
    std::set<VarId> scope_;
    std::set<LinIneq> ineqs_;
    bool contradiction_ = false;
};

struct PolySet {
    std::vector<Polyhedron> disjuncts;
    bool empty() const { return disjuncts.empty(); }
    std::size_t size() const { return disjuncts.size(); }
};

// { o_j - o_i >= 0 : i != j } over the output variables.
Polyhedron assume_outcome(const NetworkModel& m, std::size_t j);

// Affine preimage: substitutes rhs for `node` and removes it from scope.
Polyhedron backward_assign(const Polyhedron& p, VarId node, const LinExpr& rhs);

// ReLU preimage: renames post-activation `node` to the fresh `pre` variable.
// A fixed flag keeps one branch; unknown yields both. Trivially empty
// branches are dropped.
PolySet backward_relu(const Polyhedron& p, VarId node, VarId pre, Flag flag);

Polyhedron meet(const Polyhedron& p, const Polyhedron& q);
Polyhedron meet(const Polyhedron& p, const Box& box);

// Exact shadow of p onto scope \ vars (Fourier-Motzkin, with equality
// substitution where available).
Polyhedron project_out(const Polyhedron& p, std::span<const VarId> vars);

bool is_empty(const Polyhedron& p);
Box bounding_box(const Polyhedron& p);

// Drops rows implied by the remaining ones (one LP per row).
Polyhedron remove_redundant(const Polyhedron& p);

}  // namespace fairsplit
