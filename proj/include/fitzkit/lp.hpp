#pragma once

#include <vector>

#include "fitzkit/rational.hpp"

namespace fitzkit::lp {

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  Rational value;       // objective at the optimum (valid when optimal)
  QVec solution;        // primal point (valid when optimal)
};

/// Exact two-phase simplex with Bland's rule for
///   minimize c·λ  subject to  A λ = b,  λ ≥ 0.
/// `rows` holds A row by row. Sized for the tiny programs that arise when
/// evaluating V-form functions (a handful of rows, tens to hundreds of columns).
Result minimize(const std::vector<QVec>& rows, const QVec& rhs, const QVec& cost);

/// Feasibility of A λ = b, λ ≥ 0.
bool feasible(const std::vector<QVec>& rows, const QVec& rhs);

/// Whether `target` is a convex combination of `points`.
bool in_convex_hull(const std::vector<QVec>& points, const QVec& target);

}  // namespace fitzkit::lp
