#include "fairsplit/lp.hpp"

#include <set>

namespace fairsplit {

namespace {

// Tableau simplex for: maximize c.y s.t. A y <= b, y >= 0, using one auxiliary
// column for phase 1. Entering and leaving choices follow Bland's rule, so
// the exact pivots always terminate.
class Tableau {
public:
    Tableau(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
            const std::vector<Rational>& c)
        : m_(static_cast<int>(b.size())),
          n_(static_cast<int>(c.size())),
          N_(n_ + 1),
          B_(m_),
          D_(m_ + 2, std::vector<Rational>(n_ + 2)) {
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) D_[i][j] = A[i][j];
            B_[i] = n_ + i;
            D_[i][n_] = -1;
            D_[i][n_ + 1] = b[i];
        }
        for (int j = 0; j < n_; ++j) {
            N_[j] = j;
            D_[m_][j] = -c[j];
        }
        N_[n_] = -1;
        D_[m_ + 1][n_] = 1;
    }

    LpStatus solve(Rational& value, std::vector<Rational>& y) {
        int r = 0;
        for (int i = 1; i < m_; ++i) {
            if (D_[i][n_ + 1] < D_[r][n_ + 1]) r = i;
        }
        if (m_ > 0 && D_[r][n_ + 1] < 0) {
            pivot(r, n_);
            if (!run(2) || D_[m_ + 1][n_ + 1] < 0) return LpStatus::infeasible;
            for (int i = 0; i < m_; ++i) {
                if (B_[i] != -1) continue;
                int s = -1;
                for (int j = 0; j <= n_; ++j) {
                    if (D_[i][j] != 0 && (s == -1 || N_[j] < N_[s])) s = j;
                }
                if (s != -1) pivot(i, s);
            }
        }
        bool bounded = run(1);
        y.assign(static_cast<std::size_t>(n_), Rational(0));
        for (int i = 0; i < m_; ++i) {
            if (B_[i] >= 0 && B_[i] < n_) y[static_cast<std::size_t>(B_[i])] = D_[i][n_ + 1];
        }
        if (!bounded) return LpStatus::unbounded;
        value = D_[m_][n_ + 1];
        return LpStatus::optimal;
    }

private:
    void pivot(int r, int s) {
        Rational inv = 1 / D_[r][s];
        const auto& row = D_[r];
        for (int i = 0; i < m_ + 2; ++i) {
            if (i == r || D_[i][s] == 0) continue;
            Rational k = D_[i][s] * inv;
            auto& target = D_[i];
            for (int j = 0; j < n_ + 2; ++j) {
                if (row[j] != 0) target[j] -= row[j] * k;
            }
            target[s] = row[s] * k;
        }
        for (int j = 0; j < n_ + 2; ++j) {
            if (j != s) D_[r][j] *= inv;
        }
        for (int i = 0; i < m_ + 2; ++i) {
            if (i != r) D_[i][s] *= -inv;
        }
        D_[r][s] = inv;
        std::swap(B_[r], N_[s]);
    }

    bool run(int phase) {
        int x = m_ + phase - 1;
        for (;;) {
            int s = -1;
            for (int j = 0; j <= n_; ++j) {
                if (N_[j] == -phase) continue;
                if (D_[x][j] < 0 && (s == -1 || N_[j] < N_[s])) s = j;
            }
            if (s == -1) return true;
            int r = -1;
            Rational best;
            for (int i = 0; i < m_; ++i) {
                if (D_[i][s] <= 0) continue;
                Rational ratio = D_[i][n_ + 1] / D_[i][s];
                if (r == -1 || ratio < best || (ratio == best && B_[i] < B_[r])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r == -1) return false;
            pivot(r, s);
        }
    }

    int m_, n_;
    std::vector<int> N_, B_;
    std::vector<std::vector<Rational>> D_;
};

std::vector<VarId> collect_vars(std::span<const LinIneq> constraints, const LinExpr& objective) {
    std::set<VarId> vars;
    for (const auto& c : constraints) {
        for (const auto& [v, k] : c.expr().coeffs()) vars.insert(v);
    }
    for (const auto& [v, k] : objective.coeffs()) vars.insert(v);
    return {vars.begin(), vars.end()};
}

}  // namespace

LpResult maximize(std::span<const LinIneq> constraints, const LinExpr& objective) {
    LpResult result;
    for (const auto& c : constraints) {
        if (c.is_constant() && c.expr().constant() > 0) return result;
    }
    std::vector<VarId> vars = collect_vars(constraints, objective);
    std::map<VarId, int> column;
    for (std::size_t i = 0; i < vars.size(); ++i) column[vars[i]] = static_cast<int>(i);
    const std::size_t n = vars.size();

    std::vector<std::vector<Rational>> A;
    std::vector<Rational> b;
    for (const auto& c : constraints) {
        if (c.is_constant()) continue;
        std::vector<Rational> row(2 * n);
        for (const auto& [v, k] : c.expr().coeffs()) {
            auto j = static_cast<std::size_t>(column[v]);
            row[j] = k;
            row[n + j] = -k;
        }
        A.push_back(std::move(row));
        b.push_back(-c.expr().constant());
    }
    std::vector<Rational> cost(2 * n);
    for (const auto& [v, k] : objective.coeffs()) {
        auto j = static_cast<std::size_t>(column[v]);
        cost[j] = k;
        cost[n + j] = -k;
    }

    Tableau tableau(A, b, cost);
    std::vector<Rational> y;
    Rational value;
    result.status = tableau.solve(value, y);
    if (result.status == LpStatus::infeasible) return result;
    for (std::size_t j = 0; j < n; ++j) result.point[vars[j]] = y[j] - y[n + j];
    if (result.status == LpStatus::optimal) result.value = value + objective.constant();
    return result;
}

LpResult minimize(std::span<const LinIneq> constraints, const LinExpr& objective) {
    LpResult r = maximize(constraints, -objective);
    if (r.status == LpStatus::optimal) r.value = -r.value;
    return r;
}

namespace {

// Fresh variable id outside any layer encoding in use.
constexpr VarId kSlackVar = make_var(2047, (1u << 20) - 1, true);

}  // namespace

std::optional<InteriorPoint> interior_point(std::span<const LinIneq> constraints) {
    std::vector<LinIneq> rows;
    rows.reserve(constraints.size() + 1);
    for (const auto& c : constraints) {
        if (c.is_constant()) {
            if (c.expr().constant() > 0) return std::nullopt;
            // A constant row 0 <= 0 caps the slack at 0.
            if (c.expr().constant() == 0) rows.emplace_back(LinExpr::var(kSlackVar));
            continue;
        }
        rows.emplace_back(c.expr() + LinExpr::var(kSlackVar));
    }
    rows.emplace_back(LinExpr::var(kSlackVar) - LinExpr(Rational(1)));
    LpResult r = maximize(rows, LinExpr::var(kSlackVar));
    if (r.status != LpStatus::optimal) return std::nullopt;
    InteriorPoint ip;
    ip.slack = r.value;
    if (ip.slack < 0) return std::nullopt;
    r.point.erase(kSlackVar);
    ip.point = std::move(r.point);
    return ip;
}

std::optional<Point> find_point(std::span<const LinIneq> constraints) {
    bool any_strict = false;
    for (const auto& c : constraints) any_strict = any_strict || c.strict();
    if (!any_strict) {
        LpResult r = maximize(constraints, LinExpr());
        if (r.status == LpStatus::infeasible) return std::nullopt;
        return std::move(r.point);
    }
    std::vector<LinIneq> rows;
    for (const auto& c : constraints) {
        if (c.strict()) {
            rows.emplace_back(c.expr() + LinExpr::var(kSlackVar));
        } else {
            rows.push_back(c);
        }
    }
    rows.emplace_back(LinExpr::var(kSlackVar) - LinExpr(Rational(1)));
    LpResult r = maximize(rows, LinExpr::var(kSlackVar));
    if (r.status != LpStatus::optimal || r.value <= 0) return std::nullopt;
    r.point.erase(kSlackVar);
    return std::move(r.point);
}

}  // namespace fairsplit
