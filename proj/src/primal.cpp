#include "rdl/primal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rdl/error.hpp"

namespace rdl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The objective restricted to positive-mass points.
class Objective {
 public:
  Objective(const Problem& problem, double lambda) : loss_(problem.loss()), lambda_(lambda) {
    const auto& mu = problem.measure().masses();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      if (mu[i] > 0.0) keep.push_back(i);
    }
    m_.resize(static_cast<Eigen::Index>(keep.size()), problem.margin_matrix().cols());
    mu_.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
      m_.row(static_cast<Eigen::Index>(k)) = problem.margin_matrix().row(keep[k]);
      mu_[static_cast<Eigen::Index>(k)] = mu[keep[k]];
    }
  }

  Eigen::Index dim() const { return m_.cols(); }
  bool empty() const { return mu_.size() == 0; }
  Vector margins(const Vector& w) const { return m_ * w; }

  double risk_at(const Vector& margins) const {
    double r = 0.0;
    for (Eigen::Index i = 0; i < margins.size(); ++i) r += mu_[i] * loss_.eval(margins[i]);
    return r;
  }
  double value(const Vector& w, const Vector& margins) const {
    return risk_at(margins) + 0.5 * lambda_ * w.squaredNorm();
  }
  Vector gradient(const Vector& w, const Vector& margins) const {
    Vector s(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i) s[i] = mu_[i] * loss_.deriv(margins[i]);
    Vector g = m_.transpose() * s;
    if (lambda_ != 0.0) g += lambda_ * w;
    return g;
  }
  Matrix hessian(const Vector& margins) const {
    Vector s(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i) s[i] = mu_[i] * loss_.second_deriv(margins[i]);
    Matrix h = m_.transpose() * s.asDiagonal() * m_;
    h.diagonal().array() += lambda_;
    return h;
  }
  bool strict_separator(const Vector& margins) const {
    return margins.size() > 0 && (margins.array() < 0.0).all();
  }

 private:
  Matrix m_;
  Vector mu_;
  Loss loss_;
  double lambda_;
};

void validate(const SolverConfig& c) {
  if (!(c.grad_tol > 0.0) || !(c.norm_cap > 0.0) || !(c.initial_step > 0.0) ||
      !(c.armijo_c > 0.0 && c.armijo_c < 1.0) || !(c.shrink > 0.0 && c.shrink < 1.0) ||
      !(c.growth >= 1.0)) {
    throw DomainError("solver configuration needs positive tolerances and 0 < c, shrink < 1");
  }
}

Iterate make_iterate(std::size_t t, const Vector& w, const Objective& obj, const Vector& margins,
                     double lambda) {
  Iterate it;
  it.t = t;
  it.w = w;
  it.risk = obj.risk_at(margins);
  it.objective = it.risk + 0.5 * lambda * w.squaredNorm();
  it.l1_norm = w.lpNorm<1>();
  it.l2_norm = w.norm();
  return it;
}

Vector newton_direction(const Matrix& h, const Vector& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const Vector& ev = eig.eigenvalues();
  const double top = ev.size() > 0 ? ev.maxCoeff() : 0.0;
  Vector d = Vector::Zero(g.size());
  if (!(top > 0.0)) return -g;
  const Vector proj = eig.eigenvectors().transpose() * g;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev[k] > 1e-14 * top) d -= (proj[k] / ev[k]) * eig.eigenvectors().col(k);
  }
  if (!d.allFinite() || !(g.dot(d) < 0.0)) return -g;
  return d;
}

PrimalTrajectory run_smooth(const Problem& problem, double lambda, const SolverConfig& config) {
  const Objective obj(problem, lambda);
  PrimalTrajectory traj;
  traj.lambda = lambda;
  Vector w = Vector::Zero(obj.dim());
  Vector m = obj.margins(w);
  double f = obj.value(w, m);
  traj.iterates.push_back(make_iterate(0, w, obj, m, lambda));
  double step = config.initial_step;
  traj.termination = Termination::IterationCap;
  for (std::size_t t = 1; t <= config.max_iters; ++t) {
    if (w.lpNorm<1>() > config.norm_cap) {
      traj.termination = Termination::NormCap;
      break;
    }
    if (lambda == 0.0 && obj.strict_separator(m) && w.lpNorm<1>() > 0.0) {
      // Every margin is negative, so scaling up w can only lower the risk.
      w *= 2.0;
      m = obj.margins(w);
      f = obj.value(w, m);
      traj.iterates.push_back(make_iterate(t, w, obj, m, lambda));
      continue;
    }
    const Vector g = obj.gradient(w, m);
    if (g.lpNorm<Eigen::Infinity>() <= config.grad_tol * std::min(1.0, f)) {
      traj.termination = Termination::GradientSmall;
      break;
    }
    const bool newton = config.step_rule == StepRule::Newton;
    const Vector dir = newton ? newton_direction(obj.hessian(m), g) : Vector(-g);
    const double slope = g.dot(dir);
    double s = newton ? 1.0 : step;
    bool accepted = false;
    bool full = true;
    bool at_noise = false;
    Vector trial;
    Vector trial_m;
    double trial_f = kInf;
    for (int k = 0; k < 200; ++k) {
      trial = w + s * dir;
      trial_m = obj.margins(trial);
      trial_f = obj.value(trial, trial_m);
      // Within a few ulps of f the sufficient-decrease test is noise; by
      // convexity a nonpositive slope at the trial point still means descent
      // (the computed f may then move by an ulp either way).
      if (std::abs(f - trial_f) <= 1e-14 * std::abs(f)) {
        if (obj.gradient(trial, trial_m).dot(dir) <= 0.0) {
          accepted = true;
          at_noise = true;
          break;
        }
      } else if (trial_f <= f + config.armijo_c * s * slope) {
        accepted = true;
        break;
      }
      s *= config.shrink;
      full = false;
    }
    if (!accepted) {
      traj.termination = Termination::LineSearchStall;
      break;
    }
    if (!newton && !at_noise) step = full ? s * config.growth : s;
    w = std::move(trial);
    m = std::move(trial_m);
    f = trial_f;
    traj.iterates.push_back(make_iterate(t, w, obj, m, lambda));
  }
  return traj;
}

PrimalTrajectory run_subgradient(const Problem& problem, double lambda, const SolverConfig& config) {
  const Objective obj(problem, lambda);
  PrimalTrajectory traj;
  traj.lambda = lambda;
  Vector w = Vector::Zero(obj.dim());
  Vector m = obj.margins(w);
  Vector best_w = w;
  Vector best_m = m;
  double best_f = obj.value(w, m);
  traj.iterates.push_back(make_iterate(0, w, obj, m, lambda));
  traj.termination = Termination::IterationCap;
  for (std::size_t t = 1; t <= config.max_iters; ++t) {
    if (w.lpNorm<1>() > config.norm_cap) {
      traj.termination = Termination::NormCap;
      break;
    }
    const Vector g = obj.gradient(w, m);
    if (g.lpNorm<Eigen::Infinity>() <= config.grad_tol) {
      // The fixed subgradient vanishes, so w is a minimizer.
      const double f = obj.value(w, m);
      if (f <= best_f) {
        best_f = f;
        best_w = w;
        best_m = m;
        traj.iterates.push_back(make_iterate(t, best_w, obj, best_m, lambda));
      }
      traj.termination = Termination::GradientSmall;
      break;
    }
    w -= (config.initial_step / std::sqrt(static_cast<double>(t))) * g;
    m = obj.margins(w);
    const double f = obj.value(w, m);
    if (f < best_f) {
      best_f = f;
      best_w = w;
      best_m = m;
    }
    traj.iterates.push_back(make_iterate(t, best_w, obj, best_m, lambda));
  }
  return traj;
}

}  // namespace

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::GradientSmall: return "GradientSmall";
    case Termination::IterationCap: return "IterationCap";
    case Termination::NormCap: return "NormCap";
    case Termination::LineSearchStall: return "LineSearchStall";
  }
  return "Unknown";
}

std::string_view to_string(StepRule r) {
  return r == StepRule::Newton ? "Newton" : "Gradient";
}

double risk(const Problem& problem, const Vector& w) {
  const Vector m = problem.apply_A(w);
  const auto& mu = problem.measure().masses();
  double r = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (mu[i] > 0.0) r += mu[i] * problem.loss().eval(m[i]);
  }
  return r;
}

Vector grad_risk(const Problem& problem, const Vector& w) {
  const Vector m = problem.apply_A(w);
  const auto& mu = problem.measure().masses();
  Vector s = Vector::Zero(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (mu[i] > 0.0) s[i] = mu[i] * problem.loss().deriv(m[i]);
  }
  return problem.margin_matrix().transpose() * s;
}

Matrix hessian_risk(const Problem& problem, const Vector& w) {
  const Vector m = problem.apply_A(w);
  const auto& mu = problem.measure().masses();
  Vector s = Vector::Zero(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (mu[i] > 0.0) s[i] = mu[i] * problem.loss().second_deriv(m[i]);
  }
  return problem.margin_matrix().transpose() * s.asDiagonal() * problem.margin_matrix();
}

double excess_risk(const Problem& problem, const Vector& w, double inf_estimate) {
  return risk(problem, w) - inf_estimate;
}

PrimalTrajectory minimize(const Problem& problem, const SolverConfig& config) {
  return minimize_regularized(problem, 0.0, config);
}

PrimalTrajectory minimize_regularized(const Problem& problem, double lambda, const SolverConfig& config) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and >= 0");
  validate(config);
  if (problem.loss().kind() == LossKind::Hinge) return run_subgradient(problem, lambda, config);
  return run_smooth(problem, lambda, config);
}

}  // namespace rdl
