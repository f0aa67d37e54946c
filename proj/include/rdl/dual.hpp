#ifndef RDL_DUAL_HPP_
#define RDL_DUAL_HPP_

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "rdl/measure.hpp"
#include "rdl/primal.hpp"

namespace rdl {

// LinearProgram: the hinge dual, solved exactly as an LP.
enum class Provenance { PrimalLimit, Polished, BruteForce, LinearProgram };

std::string_view to_string(Provenance p);

struct DualSolution {
  Vector q;
  double objective = 0.0;
  double feas_residual = 0.0;
  double primal_best = 0.0;
  double gap = 0.0;  // primal_best - objective
  Provenance provenance = Provenance::PrimalLimit;
  // Final primal iterate behind the solution; empty for oracle solutions.
  Vector w;
  std::optional<Termination> primal_termination;
};

// -sum_i mu_i l*(q_i); -inf if some positive-mass q_i is outside dom l*.
double dual_objective(const Problem& problem, const Vector& q);
// max_j |sum_i mu_i q_i y_i H_ij|.
double feasibility_residual(const Problem& problem, const Vector& q);

// q_i = l'(margin_i) at the final iterate.
DualSolution dual_from_primal(const Problem& problem, const PrimalTrajectory& trajectory);

// Projects onto {q : A^T (mu q) = 0} in the mu-weighted inner product, using
// only positive-mass points. The pseudo-inverse is computed once.
class FeasibilityProjector {
 public:
  explicit FeasibilityProjector(const Problem& problem);
  Vector project(const Vector& q) const;
  const std::vector<std::size_t>& support() const { return support_; }

 private:
  std::vector<std::size_t> support_;
  std::size_t n_ = 0;
  Matrix b_;       // rows of the margin matrix on the support
  Vector mu_;
  Matrix g_pinv_;  // (B^T W B)^+
};

// Dykstra alternating projections between the constraint subspace and the
// box [0, sup dom l*]. Zero-mass points are set to 0. Throws
// ConvergenceError after max_iters. When primal_best is absent, R(0) is used.
DualSolution polish_feasibility(const Problem& problem, const Vector& q0, double tol = 1e-10,
                                std::size_t max_iters = 200000,
                                std::optional<double> primal_best = std::nullopt);

struct DualConfig {
  SolverConfig solver = [] {
    SolverConfig c;
    c.step_rule = StepRule::Newton;
    c.max_iters = 2000;
    c.grad_tol = 1e-15;
    return c;
  }();
  double polish_tol = 1e-10;
  std::size_t polish_max_iters = 200000;
};

// minimize -> dual_from_primal -> polish_feasibility. The hinge loss takes
// the LP route for both sides.
DualSolution solve_dual(const Problem& problem, const DualConfig& config = {});

// Independent oracle for n <= 8 points and d <= 3 (ScaleError otherwise).
DualSolution brute_force_dual(const Problem& problem);

}  // namespace rdl

#endif  // RDL_DUAL_HPP_
