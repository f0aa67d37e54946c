#ifndef RDL_EXPERIMENTS_HPP_
#define RDL_EXPERIMENTS_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdl/audit.hpp"
#include "rdl/dual.hpp"
#include "rdl/measure.hpp"
#include "rdl/primal.hpp"
#include "rdl/structure.hpp"

namespace rdl {

struct SweepRow {
  double parameter = 0.0;
  double excess_risk = 0.0;
  double l1_distance = 0.0;
  double zero_one = 0.0;
  double l1_norm = 0.0;
  double l2_norm = 0.0;
  std::map<std::string, double> extra;
};

struct SweepReport {
  std::string kind;
  std::string parameter_name;
  std::string loss;
  std::vector<SweepRow> rows;
  // Per-job rows behind aggregated rows (generalize, regpath).
  std::vector<SweepRow> runs;
  std::vector<AuditRecord> audits;
  std::vector<std::uint64_t> seeds;
  std::map<std::string, std::string> config;
};

// Exact rational over int64, always reduced with a positive denominator.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);
  // "0.25", "1/3", "-2". Throws ParseError.
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator/(Rational a, Rational b);
  friend bool operator==(Rational a, Rational b) { return a.num_ == b.num_ && a.den_ == b.den_; }

 private:
  std::int64_t num_;
  std::int64_t den_;
};

std::string to_string(Rational r);

// Rows at t = 1, 2, 4, ... and at the final iterate.
SweepReport convergence_sweep(const Problem& problem, const SolverConfig& solver = {},
                              const DualConfig& dual = {});

// One job per (n, seed); rows hold medians per n, `runs` the individual jobs.
// Distances are taken on the population.
SweepReport generalization_sweep(const Problem& population, const std::vector<std::size_t>& n_grid,
                                 const std::vector<std::uint64_t>& seeds, const SolverConfig& solver = {});

struct RegPathConfig {
  std::vector<double> p_grid = {0.5, 1.0, 2.0, std::numeric_limits<double>::infinity()};
  std::size_t splits = 5;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  SolverConfig solver = [] {
    SolverConfig c;
    c.step_rule = StepRule::Newton;
    c.max_iters = 200;
    return c;
  }();
};

// lambda = n_train^-p, p = inf meaning 0. Rows hold medians over splits of
// the test zero-one error and ||w||_2 max_i ||h(x_i)||_2.
SweepReport regularization_sweep(const Problem& dataset, const RegPathConfig& config = {});

// w_i = (-1)^i / i on the two-point instance; zero-one errors computed in
// exact rational arithmetic.
SweepReport zo_oscillation(std::string_view epsilon, std::size_t iters, Loss loss = Loss(LossKind::Logistic));

struct AuditParams {
  std::optional<double> r;
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<double> c3;
  double delta = 0.05;
  ThresholdConfig threshold;
  BalanceConfig balance;
};

// Checks the easy-set, split, difficult-set, balance and margin bounds at w.
// Records whose hypotheses fail come back not applicable.
std::vector<AuditRecord> bound_audit(const Problem& problem, const Vector& w, const DualSolution& dual,
                                     const AuditParams& params = {});

struct BalStableTrial {
  double bal_population = 0.0;
  double bal_sample = 0.0;
  double lower_bound = 0.0;  // Bal - 8 sqrt((ln 2d + ln(4/delta)) / n)
  double n_required = 0.0;   // 256 (ln 2d + ln(4/delta)) / Bal^2
  bool kernel_contained = true;
  // bal_sample >= lower_bound, and bal_sample >= Bal / 2 once n >= n_required.
  bool holds = true;
};

// 256 (ln 2d + ln(4/delta)) / bal^2, rounded up.
std::size_t bal_stable_sample_size(double bal, std::size_t d, double delta = 0.05);

// Draws n points from mu restricted to D*, conditioned.
BalStableTrial bal_stable_trial(const Problem& problem, const DifficultSet& canonical, std::size_t n,
                                std::uint64_t seed, double delta = 0.05);

double median(std::vector<double> values);

}  // namespace rdl

#endif  // RDL_EXPERIMENTS_HPP_
