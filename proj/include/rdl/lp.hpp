#ifndef RDL_LP_HPP_
#define RDL_LP_HPP_

#include "rdl/measure.hpp"

namespace rdl {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
};

// min c^T x  s.t.  A x = b, x >= 0. Dense two-phase simplex with Bland's
// rule; meant for a few hundred variables at most.
LpResult solve_lp(const Matrix& a, const Vector& b, const Vector& c, double tol = 1e-10);

}  // namespace rdl

#endif  // RDL_LP_HPP_
