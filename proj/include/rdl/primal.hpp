#ifndef RDL_PRIMAL_HPP_
#define RDL_PRIMAL_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

#include "rdl/measure.hpp"

namespace rdl {

enum class StepRule { Gradient, Newton };
enum class Termination { GradientSmall, IterationCap, NormCap, LineSearchStall };

std::string_view to_string(Termination t);
std::string_view to_string(StepRule r);

struct SolverConfig {
  std::size_t max_iters = 100000;
  double grad_tol = 1e-10;
  double norm_cap = 1e6;
  StepRule step_rule = StepRule::Gradient;
  // Armijo parameters.
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double initial_step = 1.0;
  // Step multiplier after an accepted full step; 1 keeps the step fixed.
  double growth = 1.0;
};

struct Iterate {
  std::size_t t = 0;
  Vector w;
  double risk = 0.0;
  double objective = 0.0;  // risk + lambda/2 ||w||^2
  double l1_norm = 0.0;
  double l2_norm = 0.0;
};

struct PrimalTrajectory {
  std::vector<Iterate> iterates;
  Termination termination = Termination::IterationCap;
  // Best lower bound on inf R known to the solver. 0 unless supplied.
  double inf_estimate = 0.0;
  double lambda = 0.0;

  const Iterate& final_iterate() const { return iterates.back(); }
};

// Sum of masses times l(margins). Zero-mass points are skipped.
double risk(const Problem& problem, const Vector& w);
Vector grad_risk(const Problem& problem, const Vector& w);
// Throws UnsupportedLossError for the hinge loss.
Matrix hessian_risk(const Problem& problem, const Vector& w);
double excess_risk(const Problem& problem, const Vector& w, double inf_estimate);

PrimalTrajectory minimize(const Problem& problem, const SolverConfig& config = {});
// Minimizes R(w) + lambda ||w||_2^2 / 2. lambda = 0 is exactly minimize().
PrimalTrajectory minimize_regularized(const Problem& problem, double lambda,
                                      const SolverConfig& config = {});

}  // namespace rdl

#endif  // RDL_PRIMAL_HPP_
