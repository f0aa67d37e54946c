#include "rdl/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rdl/error.hpp"
#include "rdl/lp.hpp"
#include "rdl/parallel.hpp"
#include "rdl/primal.hpp"

namespace rdl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Margin rows -y_i h(x_i) of the positive-mass points, with their masses.
void weighted_rows(const FiniteMeasure& measure, const HypothesisSet& hypotheses, Matrix* rows, Vector* mu) {
  if (hypotheses.rows() != measure.size()) throw DimensionError("hypothesis matrix needs one row per point");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    if (measure.mass(i) > 0.0) keep.push_back(i);
  }
  rows->resize(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(hypotheses.dim()));
  mu->resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto i = keep[k];
    rows->row(static_cast<Eigen::Index>(k)) =
        -static_cast<double>(measure.point(i).y) * hypotheses.matrix().row(static_cast<Eigen::Index>(i));
    (*mu)[static_cast<Eigen::Index>(k)] = measure.mass(i);
  }
}

double positive_part_mass(const Matrix& rows, const Vector& mu, const Vector& w) {
  return mu.dot((rows * w).cwiseMax(0.0));
}

struct OrthantResult {
  double value = kInf;
  Vector w;
};

OrthantResult solve_orthant(const Matrix& rows, const Vector& mu, const Matrix& ker, unsigned orthant) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index d = rows.cols();
  const Eigen::Index k = ker.cols();
  Vector s(d);
  for (Eigen::Index j = 0; j < d; ++j) s[j] = (orthant >> j) & 1u ? -1.0 : 1.0;
  // Variables: u (d), t (n), e (n).
  const Eigen::Index nv = d + 2 * n;
  Matrix a = Matrix::Zero(n + 1 + k, nv);
  Vector b = Vector::Zero(n + 1 + k);
  Vector c = Vector::Zero(nv);
  for (Eigen::Index i = 0; i < n; ++i) {
    a.block(i, 0, 1, d) = -(rows.row(i).array() * s.transpose().array()).matrix();
    a(i, d + i) = 1.0;
    a(i, d + n + i) = -1.0;
    c[d + i] = mu[i];
  }
  a.block(n, 0, 1, d).setOnes();
  b[n] = 1.0;
  for (Eigen::Index r = 0; r < k; ++r) {
    a.block(n + 1 + r, 0, 1, d) = (ker.col(r).array() * s.array()).matrix().transpose();
  }
  const LpResult lp = solve_lp(a, b, c);
  OrthantResult out;
  if (lp.status != LpStatus::Optimal) return out;
  out.w = (s.array() * lp.x.head(d).array()).matrix();
  // Re-evaluate at the recovered direction rather than trusting the tableau.
  out.value = positive_part_mass(rows, mu, out.w);
  return out;
}

}  // namespace

bool DifficultSet::contains(std::size_t i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

DifficultSet difficult_set(const Problem& problem, const DualSolution& dual, const ThresholdConfig& config) {
  if (static_cast<std::size_t>(dual.q.size()) != problem.size()) throw DimensionError("dual solution size mismatch");
  if (!(dual.feas_residual <= config.max_residual)) {
    throw DomainError("dual solution is not polished (residual " + std::to_string(dual.feas_residual) + ")");
  }
  DifficultSet ds;
  ds.loss_kind = problem.loss().kind();
  const double qmax = dual.q.size() > 0 ? dual.q.maxCoeff() : 0.0;
  ds.threshold_used = std::max(config.abs_floor, config.rel * qmax);
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const double q = dual.q[static_cast<Eigen::Index>(i)];
    if (q > ds.threshold_used) {
      ds.indices.push_back(i);
    } else {
      ds.complement.push_back(i);
    }
    if (q >= ds.threshold_used / config.band && q <= ds.threshold_used * config.band) ds.ambiguous.push_back(i);
  }
  return ds;
}

DifficultSet canonical_difficult_set(const Problem& problem, const DualConfig& dual_config,
                                     const ThresholdConfig& config) {
  const Problem exp_problem = problem.with_loss(Loss(LossKind::Exponential));
  return difficult_set(exp_problem, solve_dual(exp_problem, dual_config), config);
}

KernelBasis kernel(const FiniteMeasure& measure, const HypothesisSet& hypotheses, double sv_rel_cutoff) {
  Matrix rows;
  Vector mu;
  weighted_rows(measure, hypotheses, &rows, &mu);
  const auto d = static_cast<Eigen::Index>(hypotheses.dim());
  KernelBasis kb;
  if (rows.rows() == 0 || d == 0) {
    kb.basis = Matrix::Identity(d, d);
    kb.perp_basis = Matrix::Zero(d, 0);
    return kb;
  }
  const Matrix scaled = mu.cwiseSqrt().asDiagonal() * rows;
  Eigen::JacobiSVD<Matrix> svd(scaled, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv[0] : 0.0;
  kb.sv_cutoff = sv_rel_cutoff * top;
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (top > 0.0 && sv[k] > kb.sv_cutoff) ++rank;
  }
  kb.perp_basis = svd.matrixV().leftCols(rank);
  kb.basis = svd.matrixV().rightCols(d - rank);
  return kb;
}

std::string_view to_string(BalanceMethod m) {
  return m == BalanceMethod::OrthantExact ? "OrthantExact" : "StochasticUpper";
}

double positive_margin_mass(const FiniteMeasure& measure, const HypothesisSet& hypotheses, const Vector& w) {
  Matrix rows;
  Vector mu;
  weighted_rows(measure, hypotheses, &rows, &mu);
  if (w.size() != rows.cols()) throw DimensionError("direction has the wrong length");
  return positive_part_mass(rows, mu, w);
}

BalanceResult balance(const FiniteMeasure& measure, const HypothesisSet& hypotheses, const BalanceConfig& config) {
  const KernelBasis kb = kernel(measure, hypotheses, config.sv_rel_cutoff);
  BalanceResult out;
  if (kb.perp_basis.cols() == 0) {
    out.value = kInf;
    return out;
  }
  Matrix rows;
  Vector mu;
  weighted_rows(measure, hypotheses, &rows, &mu);
  const auto d = static_cast<Eigen::Index>(hypotheses.dim());

  if (static_cast<std::size_t>(d) <= config.exact_dim_cap) {
    out.method = BalanceMethod::OrthantExact;
    const unsigned n_orthants = 1u << d;
    std::vector<OrthantResult> results(n_orthants);
    parallel_for(n_orthants, [&](std::size_t o) {
      results[o] = solve_orthant(rows, mu, kb.basis, static_cast<unsigned>(o));
    });
    out.value = kInf;
    for (unsigned o = 0; o < n_orthants; ++o) {
      out.certificate.push_back(results[o].value);
      if (results[o].value < out.value) {
        out.value = results[o].value;
        out.argmin_direction = results[o].w;
      }
    }
    return out;
  }

  // Upper bound: random directions in Ker^perp, then projected subgradient.
  out.method = BalanceMethod::StochasticUpper;
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal;
  const Matrix& p = kb.perp_basis;
  Vector best;
  double best_value = kInf;
  for (std::size_t k = 0; k < config.n_directions; ++k) {
    Vector z(p.cols());
    for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = normal(rng);
    Vector w = p * z;
    const double l1 = w.lpNorm<1>();
    if (!(l1 > 0.0)) continue;
    w /= l1;
    const double v = positive_part_mass(rows, mu, w);
    if (v < best_value) {
      best_value = v;
      best = w;
    }
  }
  Vector w = best;
  for (std::size_t it = 1; it <= config.refine_iters && best_value > 0.0; ++it) {
    const Vector m = rows * w;
    Vector g = Vector::Zero(d);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      if (m[i] > 0.0) g += mu[i] * rows.row(i).transpose();
    }
    g = p * (p.transpose() * g);
    if (g.lpNorm<Eigen::Infinity>() == 0.0) break;
    w -= (0.1 / std::sqrt(static_cast<double>(it))) * g / g.norm();
    const double l1 = w.lpNorm<1>();
    if (!(l1 > 0.0)) break;
    w /= l1;
    const double v = positive_part_mass(rows, mu, w);
    if (v < best_value) {
      best_value = v;
      best = w;
    }
  }
  out.value = best_value;
  out.argmin_direction = best;
  return out;
}

Theta Theta::beta(Loss loss) { return Theta(Kind::Beta, loss, 0.0); }
Theta Theta::beta_conj(Loss loss) { return Theta(Kind::BetaConj, loss, 0.0); }
Theta Theta::power(double p) {
  if (!(p >= 1.0)) throw DomainError("power Young function needs p >= 1");
  return Theta(Kind::Power, Loss(LossKind::Logistic), p);
}

double Theta::operator()(double s) const {
  switch (kind_) {
    case Kind::Beta: return loss_.beta(s);
    case Kind::BetaConj: return loss_.beta_conj(s);
    case Kind::Power: return std::pow(std::abs(s), p_);
  }
  return kInf;
}

double luxemburg_norm(const Vector& values, const Vector& masses, const Theta& theta) {
  if (values.size() != masses.size()) throw DimensionError("values and masses differ in length");
  if ((masses.array() < 0.0).any()) throw DomainError("masses must be nonnegative");
  bool all_zero = true;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (masses[i] > 0.0 && values[i] != 0.0) all_zero = false;
  }
  if (all_zero) return 0.0;
  auto phi = [&](double r) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (masses[i] > 0.0 && values[i] != 0.0) total += masses[i] * theta(values[i] / r);
    }
    return total;
  };
  double hi = 1.0;
  if (phi(hi) <= 1.0) {
    while (hi > 1e-300 && phi(0.5 * hi) <= 1.0) hi *= 0.5;
  } else {
    while (phi(hi) > 1.0) {
      hi *= 2.0;
      if (hi > 1e15) return kInf;
    }
  }
  double lo = 0.5 * hi;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

AuditRecord norm_bound_audit(const Problem& problem, const Vector& w, const BalanceResult& bal) {
  const double s_bar = problem.loss().deriv(0.0);
  std::map<std::string, double> params{{"balance", bal.value}, {"s_bar", s_bar}};
  if (!(bal.value > 1e-12) || bal.value == kInf) {
    return not_applicable("fact:bal", "balance is 0 or infinite", params);
  }
  if (bal.method == BalanceMethod::StochasticUpper) {
    return not_applicable("fact:bal", "balance is only an upper estimate", params);
  }
  const KernelBasis kb = kernel(problem.measure(), problem.hypotheses());
  const Vector w_perp = kb.perp_basis * (kb.perp_basis.transpose() * w);
  const double lhs = w_perp.lpNorm<1>();
  const double rhs = risk(problem, w_perp) / (s_bar * bal.value);
  return make_audit("fact:bal", lhs, rhs, params);
}

}  // namespace rdl
