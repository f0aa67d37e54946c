#include "rdl/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdl/error.hpp"
#include "rdl/lp.hpp"

namespace rdl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> positive_support(const FiniteMeasure& m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.mass(i) > 0.0) out.push_back(i);
  }
  return out;
}

Matrix pseudo_inverse(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
  const Vector& ev = eig.eigenvalues();
  const double top = ev.size() > 0 ? ev.cwiseAbs().maxCoeff() : 0.0;
  Vector inv = Vector::Zero(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev[k] > 1e-13 * top) inv[k] = 1.0 / ev[k];
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

DualSolution finish(const Problem& problem, Vector q, Provenance provenance, double primal_best) {
  DualSolution s;
  s.objective = dual_objective(problem, q);
  s.feas_residual = feasibility_residual(problem, q);
  s.q = std::move(q);
  s.primal_best = primal_best;
  s.gap = primal_best - s.objective;
  s.provenance = provenance;
  return s;
}

// Orthonormal basis of {v : c v = 0}.
Matrix nullspace(const Matrix& c) {
  if (c.rows() == 0) return Matrix::Identity(c.cols(), c.cols());
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv[0] : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] > 1e-10 * top && top > 0.0) ++rank;
  }
  return svd.matrixV().rightCols(c.cols() - rank);
}

// Rows: sum_i p_i M_ij = 0 for each hypothesis j, over the given points.
Matrix constraint_rows(const Problem& problem, const std::vector<std::size_t>& idx) {
  Matrix c(problem.margin_matrix().cols(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    c.col(static_cast<Eigen::Index>(k)) =
        problem.margin_matrix().row(static_cast<Eigen::Index>(idx[k])).transpose();
  }
  return c;
}

// max c^T p  s.t.  M^T p = 0, 0 <= p <= 1, via slack variables.
LpResult max_over_cone_box(const Matrix& cons, const Vector& gain) {
  const Eigen::Index d = cons.rows();
  const Eigen::Index n = cons.cols();
  Matrix a = Matrix::Zero(d + n, 2 * n);
  Vector b = Vector::Zero(d + n);
  a.block(0, 0, d, n) = cons;
  a.block(d, 0, n, n).setIdentity();
  a.block(d, n, n, n).setIdentity();
  b.tail(n).setOnes();
  Vector c = Vector::Zero(2 * n);
  c.head(n) = -gain;
  LpResult r = solve_lp(a, b, c);
  if (r.status != LpStatus::Optimal) throw ConvergenceError("cone LP did not reach an optimum", kInf);
  r.x.conservativeResize(n);
  r.objective = -r.objective;
  return r;
}

// Exact hinge dual: max sum mu_i q_i over the feasible box.
Vector hinge_dual_q(const Problem& problem) {
  const auto support = positive_support(problem.measure());
  Vector q = Vector::Zero(static_cast<Eigen::Index>(problem.size()));
  if (support.empty()) return q;
  Matrix cons = constraint_rows(problem, support);
  Vector gain(static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    const double mu = problem.measure().mass(support[k]);
    cons.col(static_cast<Eigen::Index>(k)) *= mu;
    gain[static_cast<Eigen::Index>(k)] = mu;
  }
  // Rescale rows so the LP sees entries of order one.
  for (Eigen::Index j = 0; j < cons.rows(); ++j) {
    const double s = cons.row(j).cwiseAbs().maxCoeff();
    if (s > 0.0) cons.row(j) /= s;
  }
  const LpResult r = max_over_cone_box(cons, gain / gain.maxCoeff());
  for (std::size_t k = 0; k < support.size(); ++k) {
    q[static_cast<Eigen::Index>(support[k])] = std::clamp(r.x[static_cast<Eigen::Index>(k)], 0.0, 1.0);
  }
  return q;
}

// Exact hinge primal: min sum mu_i t_i, t_i >= 1 + M_i w, t >= 0.
std::pair<Vector, double> hinge_primal(const Problem& problem) {
  const auto support = positive_support(problem.measure());
  const auto d = static_cast<Eigen::Index>(problem.dim());
  if (support.empty()) return {Vector::Zero(d), 0.0};
  const auto n = static_cast<Eigen::Index>(support.size());
  // Variables: t (n), w+ (d), w- (d), e (n).
  Matrix a = Matrix::Zero(n, 2 * n + 2 * d);
  Vector b = Vector::Ones(n);
  Vector c = Vector::Zero(2 * n + 2 * d);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto i = static_cast<Eigen::Index>(support[static_cast<std::size_t>(k)]);
    a(k, k) = 1.0;
    a.block(k, n, 1, d) = -problem.margin_matrix().row(i);
    a.block(k, n + d, 1, d) = problem.margin_matrix().row(i);
    a(k, n + 2 * d + k) = -1.0;
    c[k] = problem.measure().mass(static_cast<std::size_t>(i));
  }
  const LpResult r = solve_lp(a, b, c);
  if (r.status != LpStatus::Optimal) throw ConvergenceError("hinge primal LP did not reach an optimum", kInf);
  Vector w = r.x.segment(n, d) - r.x.segment(n + d, d);
  return {w, r.objective};
}

DualSolution solve_hinge(const Problem& problem) {
  auto [w, primal] = hinge_primal(problem);
  // Report the primal risk at the recovered w, not the LP value.
  primal = risk(problem, w);
  DualSolution s = finish(problem, hinge_dual_q(problem), Provenance::LinearProgram, primal);
  s.w = std::move(w);
  return s;
}

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::PrimalLimit: return "PrimalLimit";
    case Provenance::Polished: return "Polished";
    case Provenance::BruteForce: return "BruteForce";
    case Provenance::LinearProgram: return "LinearProgram";
  }
  return "Unknown";
}

double dual_objective(const Problem& problem, const Vector& q) {
  if (static_cast<std::size_t>(q.size()) != problem.size()) throw DimensionError("q needs one entry per point");
  double total = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const double mu = problem.measure().mass(i);
    if (mu <= 0.0) continue;
    const double c = problem.loss().conjugate(q[static_cast<Eigen::Index>(i)]);
    if (c == kInf) return -kInf;
    total -= mu * c;
  }
  return total;
}

double feasibility_residual(const Problem& problem, const Vector& q) {
  if (static_cast<std::size_t>(q.size()) != problem.size()) throw DimensionError("q needs one entry per point");
  Vector weighted = problem.measure().masses().cwiseProduct(q);
  if (problem.size() == 0 || problem.dim() == 0) return 0.0;
  return (problem.margin_matrix().transpose() * weighted).lpNorm<Eigen::Infinity>();
}

DualSolution dual_from_primal(const Problem& problem, const PrimalTrajectory& trajectory) {
  if (trajectory.iterates.empty()) throw DomainError("empty trajectory");
  const Vector& w = trajectory.final_iterate().w;
  const Vector m = problem.apply_A(w);
  Vector q(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) q[i] = problem.loss().deriv(m[i]);
  DualSolution s = finish(problem, std::move(q), Provenance::PrimalLimit, risk(problem, w));
  s.w = w;
  s.primal_termination = trajectory.termination;
  return s;
}

FeasibilityProjector::FeasibilityProjector(const Problem& problem)
    : support_(positive_support(problem.measure())), n_(problem.size()) {
  const auto k = static_cast<Eigen::Index>(support_.size());
  b_.resize(k, problem.margin_matrix().cols());
  mu_.resize(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const auto i = support_[static_cast<std::size_t>(r)];
    b_.row(r) = problem.margin_matrix().row(static_cast<Eigen::Index>(i));
    mu_[r] = problem.measure().mass(i);
  }
  g_pinv_ = pseudo_inverse(b_.transpose() * mu_.asDiagonal() * b_);
}

Vector FeasibilityProjector::project(const Vector& q) const {
  Vector p(mu_.size());
  for (std::size_t r = 0; r < support_.size(); ++r) p[static_cast<Eigen::Index>(r)] = q[static_cast<Eigen::Index>(support_[r])];
  p -= b_ * (g_pinv_ * (b_.transpose() * mu_.cwiseProduct(p)));
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n_));
  for (std::size_t r = 0; r < support_.size(); ++r) out[static_cast<Eigen::Index>(support_[r])] = p[static_cast<Eigen::Index>(r)];
  return out;
}

DualSolution polish_feasibility(const Problem& problem, const Vector& q0, double tol, std::size_t max_iters,
                                std::optional<double> primal_best) {
  if (static_cast<std::size_t>(q0.size()) != problem.size()) throw DimensionError("q needs one entry per point");
  if ((q0.array() < 0.0).any()) throw DomainError("polish_feasibility needs q0 >= 0");
  const double best = primal_best ? *primal_best : risk(problem, Vector::Zero(static_cast<Eigen::Index>(problem.dim())));
  const double upper = problem.loss().conjugate_domain_upper();
  auto box = [&](const Vector& v) { return v.cwiseMax(0.0).cwiseMin(upper); };

  Vector x = q0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    if (!(problem.measure().mass(i) > 0.0)) x[static_cast<Eigen::Index>(i)] = 0.0;
  }
  auto done = [&](const Vector& v) {
    return feasibility_residual(problem, v) <= tol && (v.array() >= 0.0).all() && (v.array() <= upper).all();
  };
  if (done(x)) return finish(problem, x, Provenance::Polished, best);

  const FeasibilityProjector proj(problem);
  Vector p = Vector::Zero(x.size());
  Vector r = Vector::Zero(x.size());
  double best_residual = kInf;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const Vector y = proj.project(x + p);
    p = x + p - y;
    const Vector xn = box(y + r);
    r = y + r - xn;
    x = xn;
    const double res = feasibility_residual(problem, x);
    best_residual = std::min(best_residual, res);
    if (res <= tol) return finish(problem, x, Provenance::Polished, best);
  }
  throw ConvergenceError("feasibility polish did not converge", best_residual);
}

DualSolution solve_dual(const Problem& problem, const DualConfig& config) {
  if (problem.loss().kind() == LossKind::Hinge) return solve_hinge(problem);
  const PrimalTrajectory traj = minimize(problem, config.solver);
  const DualSolution raw = dual_from_primal(problem, traj);
  DualSolution s = polish_feasibility(problem, raw.q, config.polish_tol, config.polish_max_iters, raw.primal_best);
  s.w = raw.w;
  s.primal_termination = raw.primal_termination;
  return s;
}

DualSolution brute_force_dual(const Problem& problem) {
  if (problem.size() > 8 || problem.dim() > 3) {
    throw ScaleError("brute_force_dual supports at most 8 points and d <= 3");
  }
  const double r0 = risk(problem, Vector::Zero(static_cast<Eigen::Index>(problem.dim())));
  if (problem.loss().kind() == LossKind::Hinge) return finish(problem, hinge_dual_q(problem), Provenance::BruteForce, r0);

  const auto support = positive_support(problem.measure());
  Vector q = Vector::Zero(static_cast<Eigen::Index>(problem.size()));
  if (support.empty() || problem.dim() == 0) {
    // No constraints bind: each q_i minimizes l*, i.e. q_i = l'(0).
    for (std::size_t i : support) q[static_cast<Eigen::Index>(i)] = problem.loss().deriv(0.0);
    if (support.empty()) return finish(problem, q, Provenance::BruteForce, r0);
  }

  // Support of the feasible cone: point i is in it iff max p_i > 0.
  const Matrix cons = constraint_rows(problem, support);
  const auto n = static_cast<Eigen::Index>(support.size());
  Vector witness = Vector::Zero(n);
  std::vector<std::size_t> in_d;
  std::vector<Eigen::Index> local;
  if (problem.dim() == 0) {
    witness.setOnes();
  } else {
    for (Eigen::Index k = 0; k < n; ++k) {
      Vector gain = Vector::Zero(n);
      gain[k] = 1.0;
      const LpResult r = max_over_cone_box(cons, gain);
      if (r.objective > 1e-9) witness += r.x;
    }
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (witness[k] > 1e-9) {
      in_d.push_back(support[static_cast<std::size_t>(k)]);
      local.push_back(k);
    }
  }
  if (in_d.empty()) return finish(problem, q, Provenance::BruteForce, r0);

  // On D the primal attains its minimum over Ker^perp, and q = l'(margins)
  // there. Damped Newton in coordinates of Ker^perp.
  const auto kd = static_cast<Eigen::Index>(in_d.size());
  Matrix rows(kd, static_cast<Eigen::Index>(problem.dim()));
  Vector mu(kd);
  for (Eigen::Index k = 0; k < kd; ++k) {
    rows.row(k) = problem.margin_matrix().row(static_cast<Eigen::Index>(in_d[static_cast<std::size_t>(k)]));
    mu[k] = problem.measure().mass(in_d[static_cast<std::size_t>(k)]);
  }
  const Matrix perp = nullspace(nullspace(mu.cwiseSqrt().asDiagonal() * rows).transpose());
  const Matrix b = rows * perp;
  const Loss& loss = problem.loss();
  auto value = [&](const Vector& m) {
    double v = 0.0;
    for (Eigen::Index k = 0; k < kd; ++k) v += mu[k] * loss.eval(m[k]);
    return v;
  };
  Vector z = Vector::Zero(b.cols());
  Vector m = Vector::Zero(kd);
  double f = value(m);
  for (int it = 0; it < 200 && b.cols() > 0; ++it) {
    Vector s1(kd);
    Vector s2(kd);
    for (Eigen::Index k = 0; k < kd; ++k) {
      s1[k] = mu[k] * loss.deriv(m[k]);
      s2[k] = mu[k] * loss.second_deriv(m[k]);
    }
    const Vector g = b.transpose() * s1;
    if (g.lpNorm<Eigen::Infinity>() <= 1e-16) break;
    const Matrix h = b.transpose() * s2.asDiagonal() * b;
    const Vector step = -h.ldlt().solve(g);
    const double slope = g.dot(step);
    if (!(slope < 0.0)) break;
    if (-slope <= 1e-14 * std::max(1.0, f)) {
      // Below the resolution of f: take the pure Newton step.
      z += step;
      m = b * z;
      f = value(m);
      continue;
    }
    double t = 1.0;
    bool moved = false;
    for (int k = 0; k < 100; ++k) {
      const Vector zt = z + t * step;
      const Vector mt = b * zt;
      const double ft = value(mt);
      if (ft <= f + 1e-4 * t * slope) {
        moved = ft < f || t == 1.0;
        z = zt;
        m = mt;
        f = ft;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  Vector qd(kd);
  for (Eigen::Index k = 0; k < kd; ++k) qd[k] = loss.deriv(m[k]);
  for (Eigen::Index k = 0; k < kd; ++k) q[static_cast<Eigen::Index>(in_d[static_cast<std::size_t>(k)])] = qd[k];
  return finish(problem, q, Provenance::BruteForce, r0);
}

}  // namespace rdl
