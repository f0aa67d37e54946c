#ifndef RDL_STRUCTURE_HPP_
#define RDL_STRUCTURE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rdl/audit.hpp"
#include "rdl/dual.hpp"
#include "rdl/measure.hpp"

namespace rdl {

struct ThresholdConfig {
  double abs_floor = 1e-8;
  double rel = 1e-6;
  // Points with q in [tau / band, tau * band] are reported as ambiguous.
  double band = 100.0;
  // Solutions with a larger feasibility residual are rejected.
  double max_residual = 1e-8;
};

struct DifficultSet {
  std::vector<std::size_t> indices;     // q > tau
  std::vector<std::size_t> complement;  // the easy set
  std::vector<std::size_t> ambiguous;   // inside the threshold band, either side
  double threshold_used = 0.0;
  LossKind loss_kind = LossKind::Exponential;

  bool contains(std::size_t i) const;
};

// Throws DomainError when the solution is not polished.
DifficultSet difficult_set(const Problem& problem, const DualSolution& dual, const ThresholdConfig& config = {});
// The difficult set of the exponential-loss dual on the same measure and
// hypotheses.
DifficultSet canonical_difficult_set(const Problem& problem, const DualConfig& dual_config = {},
                                     const ThresholdConfig& config = {});

struct KernelBasis {
  Matrix basis;       // d x k, orthonormal columns spanning Ker
  Matrix perp_basis;  // d x (d - k)
  double sv_cutoff = 0.0;
};

// Right singular vectors of the rows sqrt(mu_i) (-y_i h(x_i)).
KernelBasis kernel(const FiniteMeasure& measure, const HypothesisSet& hypotheses, double sv_rel_cutoff = 1e-10);

enum class BalanceMethod { OrthantExact, StochasticUpper };
std::string_view to_string(BalanceMethod m);

struct BalanceConfig {
  std::size_t exact_dim_cap = 12;
  std::size_t n_directions = 10000;
  std::size_t refine_iters = 2000;
  std::uint64_t seed = 0;
  double sv_rel_cutoff = 1e-10;
};

struct BalanceResult {
  double value = 0.0;  // +inf when Ker^perp = {0}
  std::optional<Vector> argmin_direction;
  BalanceMethod method = BalanceMethod::OrthantExact;
  // Per-orthant minima (+inf for empty facets), orthant k has sign -1 on
  // coordinate j iff bit j of k is set.
  std::vector<double> certificate;
};

// sum_i mu_i max((Aw)_i, 0).
double positive_margin_mass(const FiniteMeasure& measure, const HypothesisSet& hypotheses, const Vector& w);
BalanceResult balance(const FiniteMeasure& measure, const HypothesisSet& hypotheses, const BalanceConfig& config = {});

// A Young function for Luxemburg norms.
class Theta {
 public:
  static Theta beta(Loss loss);
  static Theta beta_conj(Loss loss);
  static Theta power(double p);

  double operator()(double s) const;

 private:
  enum class Kind { Beta, BetaConj, Power };
  Theta(Kind kind, Loss loss, double p) : kind_(kind), loss_(loss), p_(p) {}
  Kind kind_;
  Loss loss_;
  double p_;
};

// inf{r > 0 : sum_i mu_i theta(f_i / r) <= 1}; 0 for f = 0 and +inf when
// no r up to 1e15 works.
double luxemburg_norm(const Vector& values, const Vector& masses, const Theta& theta);

// ||w_perp||_1 <= R(w_perp) / (s_bar Bal) with w_perp the projection of w
// on Ker^perp. Not applicable when Bal is 0 or +inf.
AuditRecord norm_bound_audit(const Problem& problem, const Vector& w, const BalanceResult& balance);

}  // namespace rdl

#endif  // RDL_STRUCTURE_HPP_
