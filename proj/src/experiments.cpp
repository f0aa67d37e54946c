#include "rdl/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "rdl/error.hpp"
#include "rdl/etabar.hpp"
#include "rdl/fixtures.hpp"
#include "rdl/parallel.hpp"

namespace rdl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t narrow(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw DomainError("rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

Rational make_rational(__int128 num, __int128 den) {
  if (den == 0) throw DomainError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num;
  __int128 b = den;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(narrow(num), narrow(den));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_lb(const Loss& loss) {
  if (!loss.member_of_Lb()) throw UnsupportedLossError(std::string(loss.name()) + " is not a bounded-class loss");
}

SweepRow weight_row(const Problem& problem, const Vector& w, double parameter) {
  SweepRow row;
  row.parameter = parameter;
  row.zero_one = zero_one_risk(problem, w);
  row.l1_norm = w.lpNorm<1>();
  row.l2_norm = w.norm();
  return row;
}

std::string config_string(const SolverConfig& c) {
  std::ostringstream os;
  os << "step_rule=" << to_string(c.step_rule) << ";max_iters=" << c.max_iters << ";grad_tol=" << fmt(c.grad_tol)
     << ";norm_cap=" << fmt(c.norm_cap);
  return os.str();
}

double mass_over(const FiniteMeasure& m, const std::vector<std::size_t>& idx) {
  double s = 0.0;
  for (std::size_t i : idx) s += m.mass(i);
  return s;
}

// inf of l'' over [a, b]. l'' is unimodal for the bounded-class losses, so
// the infimum sits at an endpoint.
double inf_second_deriv(const Loss& loss, double a, double b) {
  return std::min(loss.second_deriv(a), loss.second_deriv(b));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den == 0) throw DomainError("zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty rational", 0);
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const Rational n = parse(s.substr(0, slash));
    const Rational d = parse(s.substr(slash + 1));
    if (d.num() == 0) throw ParseError("zero denominator in '" + s + "'", 0);
    return n / d;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '-' || s[pos] == '+') negative = s[pos++] == '-';
  __int128 num = 0;
  __int128 den = 1;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    const char ch = s[pos];
    if (ch == '.' && !seen_point) {
      seen_point = true;
      continue;
    }
    if (ch < '0' || ch > '9') throw ParseError("not a decimal number: '" + s + "'", 0);
    seen_digit = true;
    num = num * 10 + (ch - '0');
    if (seen_point) den *= 10;
    if (num > std::numeric_limits<std::int64_t>::max() || den > std::numeric_limits<std::int64_t>::max()) {
      throw ParseError("too many digits: '" + s + "'", 0);
    }
  }
  if (!seen_digit) throw ParseError("not a decimal number: '" + s + "'", 0);
  return make_rational(negative ? -num : num, den);
}

Rational operator+(Rational a, Rational b) {
  return make_rational(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                       static_cast<__int128>(a.den_) * b.den_);
}
Rational operator-(Rational a, Rational b) { return a + Rational(-b.num_, b.den_); }
Rational operator*(Rational a, Rational b) {
  return make_rational(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}
Rational operator/(Rational a, Rational b) {
  if (b.num_ == 0) throw DomainError("division by zero");
  return make_rational(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::string to_string(Rational r) {
  if (r.den() == 1) return std::to_string(r.num());
  return std::to_string(r.num()) + "/" + std::to_string(r.den());
}

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

SweepReport convergence_sweep(const Problem& problem, const SolverConfig& solver, const DualConfig& dual_config) {
  require_lb(problem.loss());
  const DualSolution dual = solve_dual(problem, dual_config);
  const DifficultSet d = difficult_set(problem, dual);
  const CondModel bar = eta_bar(problem, dual, d);
  const PrimalTrajectory traj = minimize(problem, solver);

  SweepReport report;
  report.kind = "converge";
  report.parameter_name = "t";
  report.loss = std::string(problem.loss().name());
  report.config["solver"] = config_string(solver);
  report.config["termination"] = std::string(to_string(traj.termination));
  report.config["dual_objective"] = fmt(dual.objective);
  report.config["difficult_set_size"] = std::to_string(d.indices.size());

  const std::size_t last_t = traj.final_iterate().t;
  for (const Iterate& it : traj.iterates) {
    const bool power_of_two = it.t > 0 && (it.t & (it.t - 1)) == 0;
    if (!power_of_two && it.t != last_t) continue;
    SweepRow row = weight_row(problem, it.w, static_cast<double>(it.t));
    row.excess_risk = it.risk - dual.objective;
    row.l1_distance = l1_distance(eta_w(problem, it.w), bar, problem.measure());
    row.extra["risk"] = it.risk;
    report.rows.push_back(std::move(row));
  }
  return report;
}

SweepReport generalization_sweep(const Problem& population, const std::vector<std::size_t>& n_grid,
                                 const std::vector<std::uint64_t>& seeds, const SolverConfig& solver) {
  require_lb(population.loss());
  if (n_grid.empty() || seeds.empty()) throw DomainError("n grid and seeds must be nonempty");
  if (population.size() > 1000) throw ScaleError("population support exceeds 1000 points");
  const DualSolution dual = solve_dual(population);
  const CondModel bar = eta_bar(population, dual, difficult_set(population, dual));

  struct Job {
    std::size_t n;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t n : n_grid) {
    for (std::uint64_t s : seeds) jobs.push_back({n, s});
  }
  std::vector<SweepRow> runs(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t k) {
    const Job& job = jobs[k];
    const Problem sp = population.resampled(sample(population.measure(), job.n, job.seed));
    const PrimalTrajectory traj = minimize(sp, solver);
    const Vector& w = traj.final_iterate().w;
    SweepRow row = weight_row(population, w, static_cast<double>(job.n));
    row.l1_distance = l1_distance(eta_w(population, w), bar, population.measure());
    row.excess_risk = risk(population, w) - dual.objective;
    row.extra["seed"] = static_cast<double>(job.seed);
    row.extra["empirical_excess"] = traj.final_iterate().risk - solve_dual(sp).objective;
    row.extra["sample_support"] = static_cast<double>(sp.size());
    runs[k] = std::move(row);
  });

  SweepReport report;
  report.kind = "generalize";
  report.parameter_name = "n";
  report.loss = std::string(population.loss().name());
  report.seeds = seeds;
  report.config["solver"] = config_string(solver);
  report.config["dual_objective"] = fmt(dual.objective);
  for (std::size_t a = 0; a < n_grid.size(); ++a) {
    std::vector<double> dist, excess, zo, l1, l2, emp;
    for (std::size_t b = 0; b < seeds.size(); ++b) {
      const SweepRow& r = runs[a * seeds.size() + b];
      dist.push_back(r.l1_distance);
      excess.push_back(r.excess_risk);
      zo.push_back(r.zero_one);
      l1.push_back(r.l1_norm);
      l2.push_back(r.l2_norm);
      emp.push_back(r.extra.at("empirical_excess"));
    }
    SweepRow row;
    row.parameter = static_cast<double>(n_grid[a]);
    row.l1_distance = median(dist);
    row.excess_risk = median(excess);
    row.zero_one = median(zo);
    row.l1_norm = median(l1);
    row.l2_norm = median(l2);
    row.extra["max_empirical_excess"] = *std::max_element(emp.begin(), emp.end());
    report.rows.push_back(std::move(row));
  }
  report.runs = std::move(runs);
  return report;
}

SweepReport regularization_sweep(const Problem& dataset, const RegPathConfig& config) {
  if (config.p_grid.empty()) throw DomainError("p grid must be nonempty");
  if (config.splits == 0) throw DomainError("at least one split is needed");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) throw DomainError("train fraction must lie in (0, 1)");
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.measure().mass(i) > 0.0) support.push_back(i);
  }
  if (support.size() < 20) throw DomainError("regularization sweep needs at least 20 points");
  for (double p : config.p_grid) {
    if (!(p > 0.0)) throw DomainError("p must be positive");
  }

  double x_scale = 0.0;
  for (Eigen::Index i = 0; i < dataset.hypotheses().matrix().rows(); ++i) {
    x_scale = std::max(x_scale, dataset.hypotheses().matrix().row(i).norm());
  }

  struct Split {
    std::vector<std::size_t> train, test;
  };
  std::vector<Split> splits(config.splits);
  for (std::size_t s = 0; s < config.splits; ++s) {
    std::vector<std::size_t> perm = support;
    std::mt19937_64 rng(config.seed + s);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto n_train = static_cast<std::size_t>(std::llround(config.train_fraction * static_cast<double>(perm.size())));
    splits[s].train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    splits[s].test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    std::sort(splits[s].train.begin(), splits[s].train.end());
    std::sort(splits[s].test.begin(), splits[s].test.end());
  }

  const std::size_t n_jobs = config.p_grid.size() * config.splits;
  std::vector<SweepRow> runs(n_jobs);
  parallel_for(n_jobs, [&](std::size_t k) {
    const double p = config.p_grid[k / config.splits];
    const std::size_t s = k % config.splits;
    const Split& split = splits[s];
    const double n_train = static_cast<double>(split.train.size());
    const double lambda = std::isinf(p) ? 0.0 : std::pow(n_train, -p);
    const Problem train = dataset.with_measure(dataset.measure().conditional(split.train));
    const Problem test = dataset.with_measure(dataset.measure().conditional(split.test));
    const PrimalTrajectory traj = minimize_regularized(train, lambda, config.solver);
    const Vector& w = traj.final_iterate().w;
    SweepRow row = weight_row(test, w, p);
    row.excess_risk = 0.0;
    row.extra["split"] = static_cast<double>(s);
    row.extra["lambda"] = lambda;
    row.extra["train_zero_one"] = zero_one_risk(train, w);
    row.extra["norm_scaled"] = w.norm() * x_scale;
    row.extra["train_objective"] = traj.final_iterate().objective;
    runs[k] = std::move(row);
  });

  SweepReport report;
  report.kind = "regpath";
  report.parameter_name = "p";
  report.loss = std::string(dataset.loss().name());
  for (std::size_t s = 0; s < config.splits; ++s) report.seeds.push_back(config.seed + s);
  report.config["solver"] = config_string(config.solver);
  report.config["splits"] = std::to_string(config.splits);
  report.config["train_fraction"] = fmt(config.train_fraction);
  for (std::size_t a = 0; a < config.p_grid.size(); ++a) {
    std::vector<double> zo, l1, l2, scaled;
    for (std::size_t s = 0; s < config.splits; ++s) {
      const SweepRow& r = runs[a * config.splits + s];
      zo.push_back(r.zero_one);
      l1.push_back(r.l1_norm);
      l2.push_back(r.l2_norm);
      scaled.push_back(r.extra.at("norm_scaled"));
    }
    SweepRow row;
    row.parameter = config.p_grid[a];
    row.zero_one = median(zo);
    row.l1_norm = median(l1);
    row.l2_norm = median(l2);
    row.extra["norm_scaled"] = median(scaled);
    row.extra["lambda"] = runs[a * config.splits].extra.at("lambda");
    report.rows.push_back(std::move(row));
  }
  report.runs = std::move(runs);
  return report;
}

SweepReport zo_oscillation(std::string_view epsilon, std::size_t iters, Loss loss) {
  require_lb(loss);
  const Rational eps = Rational::parse(epsilon);
  if (eps.sign() < 0 || !(eps.num() < eps.den())) throw DomainError("epsilon must lie in [0, 1)");
  if (iters == 0) throw DomainError("at least one iterate is needed");
  const Rational one(1);
  const Rational mass_a = (one - eps) / (Rational(2) - eps);
  const Rational mass_b = one / (Rational(2) - eps);
  const Rational x_a(-1);
  const Rational x_b = one - eps;

  const Problem problem = fixtures::zo(eps.to_double(), loss);
  const DualSolution dual = solve_dual(problem);
  const CondModel bar = eta_bar(problem, dual, difficult_set(problem, dual));

  SweepReport report;
  report.kind = "zo";
  report.parameter_name = "i";
  report.loss = std::string(loss.name());
  report.config["epsilon"] = to_string(eps);
  report.config["iters"] = std::to_string(iters);
  for (std::size_t i = 1; i <= iters; ++i) {
    const Rational w(i % 2 == 0 ? 1 : -1, static_cast<std::int64_t>(i));
    // Both points carry label +1; sign(0) = +1.
    Rational err(0);
    if ((x_a * w).sign() < 0) err = err + mass_a;
    if ((x_b * w).sign() < 0) err = err + mass_b;
    const Rational expected = i % 2 == 1 ? mass_b : mass_a;
    Vector wv(1);
    wv[0] = w.to_double();
    SweepRow row = weight_row(problem, wv, static_cast<double>(i));
    row.excess_risk = risk(problem, wv) - dual.objective;
    row.l1_distance = l1_distance(eta_w(problem, wv), bar, problem.measure());
    row.extra["error_exact"] = err.to_double();
    row.extra["error_num"] = static_cast<double>(err.num());
    row.extra["error_den"] = static_cast<double>(err.den());
    row.extra["expected"] = expected.to_double();
    row.extra["exact_match"] = err == expected ? 1.0 : 0.0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<AuditRecord> bound_audit(const Problem& problem, const Vector& w, const DualSolution& dual,
                                     const AuditParams& params) {
  const Loss& loss = problem.loss();
  const FiniteMeasure& mu = problem.measure();
  const DifficultSet d = difficult_set(problem, dual, params.threshold);
  const Vector margins = problem.apply_A(w);
  const double total_risk = risk(problem, w);
  const double excess = total_risk - dual.objective;
  const bool lb = loss.member_of_Lb();
  std::vector<AuditRecord> out;

  auto loss_at = [&](std::size_t i) { return loss.eval(margins[static_cast<Eigen::Index>(i)]); };
  double risk_easy = 0.0;
  for (std::size_t i : d.complement) {
    if (mu.mass(i) > 0.0) risk_easy += mu.mass(i) * loss_at(i);
  }

  std::optional<CondModel> bar, ew;
  if (lb) {
    bar = eta_bar(problem, dual, d);
    ew = eta_w(problem, w);
  }
  auto gap_at = [&](std::size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    return std::abs(bar->values[ii] - ew->values[ii]);
  };

  // Easy set.
  const double r = params.r ? *params.r : std::sqrt(std::max(excess, 0.0));
  std::map<std::string, double> rp{{"r", r}, {"excess", excess}};
  if (!(r > 0.0)) {
    out.push_back(not_applicable("Dc_controls.i.risk", "r must be positive", rp));
    out.push_back(not_applicable("Dc_controls.i", "r must be positive", rp));
    out.push_back(not_applicable("Dc_controls.ii", "r must be positive", rp));
  } else {
    std::vector<std::size_t> s_r, rest;
    for (std::size_t i : d.complement) (loss_at(i) >= r ? s_r : rest).push_back(i);
    const double mass_sr = mass_over(mu, s_r);
    out.push_back(make_audit("Dc_controls.i.risk", mass_sr, risk_easy / r, rp));
    out.push_back(make_audit("Dc_controls.i", mass_sr, excess / r, rp));
    if (!lb) {
      out.push_back(not_applicable("Dc_controls.ii", "loss is not in the bounded class", rp));
    } else {
      const LossConstants k = loss.constants();
      double integral = 0.0;
      for (std::size_t i : rest) integral += mu.mass(i) * gap_at(i);
      const double factor = std::max(1.0 / k.ell_zero, *k.c_ell / k.deriv_zero);
      auto p = rp;
      p["factor"] = factor;
      out.push_back(make_audit("Dc_controls.ii", integral, r * mass_over(mu, rest) * factor, p));
    }
  }

  // Split along D.
  const Problem on_d = problem.with_measure(mu.restrict(d.indices));
  const double risk_d = risk(on_d, w);
  const double inf_d = d.indices.empty() ? 0.0 : solve_dual(on_d).objective;
  std::map<std::string, double> sp{{"excess", excess}, {"inf_D", inf_d}, {"dual_objective", dual.objective}};
  out.push_back(make_audit("hc_split.difficult", risk_d - inf_d, excess, sp));
  out.push_back(make_audit("hc_split.easy", risk_easy, excess, sp));
  out.push_back(make_audit("dual:D", std::abs(dual.objective - inf_d), 1e-5, sp));

  // Balance and the margin bound on D.
  const double s_bar = loss.constants().deriv_zero;
  out.push_back(norm_bound_audit(problem, w, balance(mu, problem.hypotheses(), params.balance)));
  double b_w = kInf;
  double bal_star = 0.0;
  if (d.indices.empty() || !(mu.mass_of(d.indices) > 0.0)) {
    out.push_back(not_applicable("fact:bal.difficult", "difficult set has zero mass"));
    out.push_back(not_applicable("gen:helper:D.i", "difficult set has zero mass"));
  } else {
    const BalanceResult bal_d = balance(on_d.measure(), on_d.hypotheses(), params.balance);
    AuditRecord a = norm_bound_audit(on_d, w, bal_d);
    a.name = "fact:bal.difficult";
    out.push_back(std::move(a));
    const double mass_d = mu.mass_of(d.indices);
    bal_star = bal_d.value / mass_d;
    std::map<std::string, double> gp{{"balance_star", bal_star}, {"delta", params.delta},
                                     {"n", static_cast<double>(d.indices.size())}};
    if (!(bal_star > 1e-12) || bal_star == kInf || bal_d.method == BalanceMethod::StochasticUpper) {
      out.push_back(not_applicable("gen:helper:D.i", "balance is 0, infinite or estimated", gp));
    } else {
      b_w = 2.0 + (loss.constants().ell_zero + 2.0 * risk_d / mass_d) / (s_bar * bal_star);
      double worst = 0.0;
      for (std::size_t i : d.indices) {
        if (mu.mass(i) > 0.0) worst = std::max(worst, std::abs(margins[static_cast<Eigen::Index>(i)]));
      }
      gp["B_w"] = b_w;
      gp["n_required"] = 256.0 * std::log(8.0 * static_cast<double>(problem.dim()) / params.delta) /
                         (bal_star * bal_star);
      out.push_back(make_audit("gen:helper:D.i", worst, b_w, gp));
    }
  }

  // Difficult set.
  const double c1 = params.c1 ? *params.c1 : b_w;
  std::map<std::string, double> dp{{"c1", c1}};
  auto d_na = [&](const std::string& why) {
    for (const char* name : {"D_controls.S+", "D_controls.S-", "D_controls.U"}) {
      out.push_back(not_applicable(name, why, dp));
    }
  };
  if (!lb) {
    d_na("loss is not in the bounded class");
    return out;
  }
  if (mu.total_mass() > 1.0 + 1e-12) {
    d_na("measure has total mass above 1");
    return out;
  }
  if (!(c1 > 0.0) || !std::isfinite(c1)) {
    d_na("c1 must be positive and finite");
    return out;
  }
  const double c2 = params.c2 ? *params.c2 : loss.deriv(-c1);
  // l'(c1) rounds to sup dom l* = 1 for the logistic loss once c1 > ~37.
  const double c3 = params.c3 ? *params.c3
                              : std::min(loss.deriv(c1), std::nextafter(loss.conjugate_domain_upper(), 0.0));
  dp["c2"] = c2;
  dp["c3"] = c3;
  if (!(c2 > 0.0) || !(c3 > c2) || !(c3 < loss.conjugate_domain_upper())) {
    d_na("need 0 < c2 < c3 inside the conjugate domain");
    return out;
  }
  const double tau = std::min(inf_second_deriv(loss, -c1, c1),
                              inf_second_deriv(loss, loss.conjugate_deriv(c2), loss.conjugate_deriv(c3)));
  dp["tau"] = tau;
  if (!(tau > 0.0)) {
    d_na("tau is zero");
    return out;
  }
  std::vector<std::size_t> u, s_plus, s_minus;
  for (std::size_t i : d.indices) {
    const double m = margins[static_cast<Eigen::Index>(i)];
    const double q = dual.q[static_cast<Eigen::Index>(i)];
    const bool q_mid = c2 <= q && q <= c3;
    if (std::abs(m) <= c1 && q_mid) u.push_back(i);
    if (m > c1) s_plus.push_back(i);
    if (m < -c1 && q >= c2) s_minus.push_back(i);
  }
  const LossConstants k = loss.constants();
  const double q_norm = luxemburg_norm(dual.q, mu.masses(), Theta::beta_conj(loss));
  const double c_mu = k.c_ell_mu(mu.total_mass());
  dp["q_norm"] = q_norm;
  dp["c_ell_mu"] = c_mu;
  out.push_back(make_audit("D_controls.S+", mass_over(mu, s_plus), total_risk / (c1 * k.deriv_zero), dp));
  out.push_back(
      make_audit("D_controls.S-", mass_over(mu, s_minus), 2.0 * c_mu * q_norm * total_risk / (c1 * c2), dp));
  double integral = 0.0;
  for (std::size_t i : u) integral += mu.mass(i) * gap_at(i);
  const double excess_d = std::max(risk_d - inf_d, 0.0);
  dp["excess_D"] = excess_d;
  out.push_back(make_audit("D_controls.U", integral, *k.L_phi * std::sqrt(2.0 * excess_d / tau), dp));
  return out;
}

std::size_t bal_stable_sample_size(double bal, std::size_t d, double delta) {
  if (!(bal > 0.0) || !std::isfinite(bal)) throw DomainError("balance must be positive and finite");
  const double logs = std::log(2.0 * static_cast<double>(d)) + std::log(4.0 / delta);
  return static_cast<std::size_t>(std::ceil(256.0 * logs / (bal * bal)));
}

BalStableTrial bal_stable_trial(const Problem& problem, const DifficultSet& canonical, std::size_t n,
                                std::uint64_t seed, double delta) {
  const FiniteMeasure cond = problem.measure().conditional(canonical.indices);
  BalStableTrial t;
  t.bal_population = balance(cond, problem.hypotheses()).value;
  const Problem sp = problem.resampled(sample(cond, n, seed));
  t.bal_sample = balance(sp.measure(), sp.hypotheses()).value;
  const double logs = std::log(2.0 * static_cast<double>(problem.dim())) + std::log(4.0 / delta);
  t.lower_bound = t.bal_population - 8.0 * std::sqrt(logs / static_cast<double>(n));
  t.n_required = 256.0 * logs / (t.bal_population * t.bal_population);
  const KernelBasis kb = kernel(cond, problem.hypotheses());
  if (kb.basis.cols() > 0) {
    const double leak = (sp.margin_matrix() * kb.basis).cwiseAbs().maxCoeff();
    t.kernel_contained = leak <= 1e-9;
  }
  t.holds = t.kernel_contained && t.bal_sample >= t.lower_bound - kAuditTolerance;
  if (static_cast<double>(n) >= t.n_required) t.holds = t.holds && t.bal_sample >= t.bal_population / 2.0 - kAuditTolerance;
  return t;
}

}  // namespace rdl
