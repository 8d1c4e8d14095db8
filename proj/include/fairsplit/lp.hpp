#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fairsplit/numeric.hpp"

namespace fairsplit {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Rational value;
    Point point;  // an optimal vertex when status == optimal
};

// Exact rational simplex over free variables. Constraints are read as
// `expr <= 0`; strictness is ignored here (see find_point).
LpResult maximize(std::span<const LinIneq> constraints, const LinExpr& objective);
LpResult minimize(std::span<const LinIneq> constraints, const LinExpr& objective);

// A point satisfying every constraint, honouring strict ones.
std::optional<Point> find_point(std::span<const LinIneq> constraints);

struct InteriorPoint {
    Rational slack;  // min over rows of -expr(point), capped at 1
    Point point;
};

// Maximizes the common slack of all rows. slack > 0 iff the system has a
// point satisfying every row strictly.
std::optional<InteriorPoint> interior_point(std::span<const LinIneq> constraints);

}  // namespace fairsplit
