#include "fairsplit/polyhedra.hpp"

#include <algorithm>
#include <map>

namespace fairsplit {

namespace {

constexpr std::size_t kRedundancyThreshold = 64;

// Keeps, among rows with parallel variable parts, only the tightest one.
std::set<LinIneq> prune_dominated(const std::set<LinIneq>& rows) {
    struct Best {
        Rational constant;  // after normalizing the variable part
        bool strict;
        const LinIneq* row;
    };
    std::map<std::map<VarId, Rational>, Best> best;
    for (const auto& r : rows) {
        Integer g = 0;
        for (const auto& [v, c] : r.expr().coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
        if (g == 0) {
            best.emplace(std::map<VarId, Rational>{}, Best{r.expr().constant(), r.strict(), &r});
            continue;
        }
        std::map<VarId, Rational> dir;
        for (const auto& [v, c] : r.expr().coeffs()) dir[v] = c / g;
        Rational k = r.expr().constant() / g;
        auto [it, inserted] = best.try_emplace(std::move(dir), Best{k, r.strict(), &r});
        if (!inserted) {
            Best& b = it->second;
            if (k > b.constant || (k == b.constant && r.strict() && !b.strict)) b = Best{k, r.strict(), &r};
        }
    }
    std::set<LinIneq> out;
    for (const auto& [dir, b] : best) out.insert(*b.row);
    return out;
}

Polyhedron rebuild(const std::set<VarId>& scope, const std::set<LinIneq>& rows) {
    Polyhedron p(scope);
    for (const auto& r : rows) p.add(r);
    return p;
}

}  // namespace

Polyhedron Polyhedron::from_box(const Box& box) {
    Polyhedron p;
    for (const auto& [v, iv] : box) {
        p.add_scope(v);
        p.add(LinIneq::ge(LinExpr::var(v), LinExpr(iv.lo)));
        p.add(LinIneq::le(LinExpr::var(v), LinExpr(iv.hi)));
    }
    return p;
}

void Polyhedron::add(const LinIneq& c) {
    if (contradiction_) return;
    if (c.is_tautology()) return;
    if (c.is_contradiction()) {
        contradiction_ = true;
        ineqs_.clear();
        ineqs_.insert(LinIneq(LinExpr(Rational(1))));
        return;
    }
    for (const auto& [v, k] : c.expr().coeffs()) scope_.insert(v);
    ineqs_.insert(c);
}

bool Polyhedron::is_empty() const {
    if (contradiction_) return true;
    auto rows = constraint_list();
    return !find_point(rows).has_value();
}

std::optional<Point> Polyhedron::witness() const {
    if (contradiction_) return std::nullopt;
    auto rows = constraint_list();
    auto pt = find_point(rows);
    if (pt) {
        for (VarId v : scope_) pt->try_emplace(v, 0);
    }
    return pt;
}

bool Polyhedron::contains(const Point& p) const {
    if (contradiction_) return false;
    return std::all_of(ineqs_.begin(), ineqs_.end(), [&](const LinIneq& c) { return c.holds_at(p); });
}

Box Polyhedron::bounding_box() const {
    if (is_empty()) throw std::domain_error("bounding box of an empty polyhedron");
    auto rows = constraint_list();
    Box box;
    for (VarId v : scope_) {
        LpResult lo = minimize(rows, LinExpr::var(v));
        LpResult hi = maximize(rows, LinExpr::var(v));
        if (lo.status != LpStatus::optimal || hi.status != LpStatus::optimal) throw unbounded_error(v);
        box[v] = Interval{lo.value, hi.value};
    }
    return box;
}

Polyhedron assume_outcome(const NetworkModel& m, std::size_t j) {
    auto out_layer = static_cast<unsigned>(m.layer_count());
    Polyhedron p;
    for (std::size_t i = 0; i < m.output_size(); ++i) p.add_scope(make_var(out_layer, static_cast<unsigned>(i)));
    LinExpr oj = LinExpr::var(make_var(out_layer, static_cast<unsigned>(j)));
    for (std::size_t i = 0; i < m.output_size(); ++i) {
        if (i == j) continue;
        p.add(LinIneq::ge(oj, LinExpr::var(make_var(out_layer, static_cast<unsigned>(i)))));
    }
    return p;
}

Polyhedron backward_assign(const Polyhedron& p, VarId node, const LinExpr& rhs) {
    std::set<VarId> scope = p.scope();
    scope.erase(node);
    for (const auto& [v, c] : rhs.coeffs()) scope.insert(v);
    Polyhedron out(std::move(scope));
    if (p.trivially_empty()) {
        out.add(LinIneq(LinExpr(Rational(1))));
        return out;
    }
    for (const auto& c : p.constraints()) {
        out.add(LinIneq(substitute(c.expr(), node, rhs), c.relation()));
    }
    return out;
}

PolySet backward_relu(const Polyhedron& p, VarId node, VarId pre, Flag flag) {
    PolySet out;
    auto branch = [&](bool active) {
        Polyhedron q = backward_assign(p, node, active ? LinExpr::var(pre) : LinExpr());
        q.add_scope(pre);
        if (active) {
            q.add(LinIneq::ge(LinExpr::var(pre), LinExpr()));
        } else {
            q.add(LinIneq::le(LinExpr::var(pre), LinExpr()));
        }
        if (!q.trivially_empty()) out.disjuncts.push_back(rebuild(q.scope(), prune_dominated(q.constraints())));
    };
    if (flag != Flag::inactive) branch(true);
    if (flag != Flag::active) branch(false);
    return out;
}

Polyhedron meet(const Polyhedron& p, const Polyhedron& q) {
    Polyhedron out = p;
    for (VarId v : q.scope()) out.add_scope(v);
    for (const auto& c : q.constraints()) out.add(c);
    if (q.trivially_empty()) out.add(LinIneq(LinExpr(Rational(1))));
    return out;
}

Polyhedron meet(const Polyhedron& p, const Box& box) { return meet(p, Polyhedron::from_box(box)); }

bool is_empty(const Polyhedron& p) { return p.is_empty(); }

Box bounding_box(const Polyhedron& p) { return p.bounding_box(); }

Polyhedron remove_redundant(const Polyhedron& p) {
    if (p.trivially_empty()) return p;
    std::vector<LinIneq> rows = p.constraint_list();
    for (std::size_t i = 0; i < rows.size();) {
        std::vector<LinIneq> others;
        others.reserve(rows.size() - 1);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (k != i) others.push_back(rows[k]);
        }
        LpResult r = maximize(others, rows[i].expr());
        bool redundant = false;
        if (r.status == LpStatus::infeasible) {
            Polyhedron empty(p.scope());
            empty.add(LinIneq(LinExpr(Rational(1))));
            return empty;
        }
        if (r.status == LpStatus::optimal) redundant = rows[i].strict() ? r.value < 0 : r.value <= 0;
        if (redundant) {
            rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    return rebuild(p.scope(), {rows.begin(), rows.end()});
}

namespace {

Polyhedron eliminate(const Polyhedron& p, VarId v) {
    std::set<VarId> scope = p.scope();
    scope.erase(v);
    if (p.trivially_empty()) {
        Polyhedron out(scope);
        out.add(LinIneq(LinExpr(Rational(1))));
        return out;
    }
    // An equality row lets us substitute instead of combining pairs.
    for (const auto& c : p.constraints()) {
        if (c.strict() || !c.expr().has(v)) continue;
        LinIneq neg(-c.expr());
        if (!p.constraints().count(neg)) continue;
        Rational a = c.expr().coeff(v);
        LinExpr rest = c.expr();
        rest.add_term(v, -a);
        LinExpr value = rest * (Rational(-1) / a);
        Polyhedron out(scope);
        for (const auto& row : p.constraints()) out.add(LinIneq(substitute(row.expr(), v, value), row.relation()));
        return out;
    }
    std::vector<const LinIneq*> pos, neg;
    Polyhedron out(scope);
    std::set<LinIneq> rows;
    for (const auto& c : p.constraints()) {
        Rational a = c.expr().coeff(v);
        if (a > 0) {
            pos.push_back(&c);
        } else if (a < 0) {
            neg.push_back(&c);
        } else {
            rows.insert(c);
        }
    }
    for (const LinIneq* up : pos) {
        Rational a = up->expr().coeff(v);
        for (const LinIneq* lo : neg) {
            Rational b = -lo->expr().coeff(v);
            LinExpr combined = up->expr() * b + lo->expr() * a;
            Relation rel = (up->strict() || lo->strict()) ? Relation::lt : Relation::le;
            LinIneq row(std::move(combined), rel);
            if (row.is_tautology()) continue;
            if (row.is_contradiction()) {
                out.add(row);
                return out;
            }
            rows.insert(std::move(row));
        }
    }
    Polyhedron result = rebuild(scope, prune_dominated(rows));
    if (result.size() > kRedundancyThreshold) result = remove_redundant(result);
    return result;
}

}  // namespace

Polyhedron project_out(const Polyhedron& p, std::span<const VarId> vars) {
    Polyhedron cur = p;
    for (VarId v : vars) cur = eliminate(cur, v);
    return cur;
}

}  // namespace fairsplit
