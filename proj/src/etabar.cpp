#include "rdl/etabar.hpp"

#include <cmath>

#include "rdl/error.hpp"

namespace rdl {
namespace {

void check_support(const Problem& problem, const CondModel& m) {
  if (static_cast<std::size_t>(m.values.size()) != problem.size()) {
    throw DimensionError("conditional model does not match the support");
  }
}

// Index of the positive-mass mirror partner, if any.
std::optional<std::size_t> live_mirror(const Problem& problem, std::size_t i) {
  const auto& j = problem.mirror()[i];
  if (j && problem.measure().mass(*j) > 0.0) return j;
  return std::nullopt;
}

double total_or_throw(const FiniteMeasure& m) {
  if (!(m.total_mass() > 0.0)) throw EmptyMassError("zero measure");
  return m.total_mass();
}

}  // namespace

double CondModel::positive(const Problem& problem, std::size_t i) const {
  const double v = values[static_cast<Eigen::Index>(i)];
  return problem.measure().point(i).y == 1 ? v : 1.0 - v;
}

CondModel eta_w(const Problem& problem, const Vector& w) {
  if (problem.loss().kind() == LossKind::Hinge) throw UnsupportedLossError("eta_w needs a differentiable loss");
  const Vector m = problem.apply_A(w);
  CondModel out;
  out.source = CondSource::FromWeights;
  out.values.resize(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) out.values[i] = problem.loss().link(-m[i]);
  return out;
}

CondModel eta_bar(const Problem& problem, const DualSolution& dual, const DifficultSet& difficult) {
  const Loss& loss = problem.loss();
  if (loss.kind() == LossKind::Hinge) throw UnsupportedLossError("eta_bar needs a differentiable loss");
  if (static_cast<std::size_t>(dual.q.size()) != problem.size()) throw DimensionError("dual solution size mismatch");
  CondModel out;
  out.source = CondSource::FromDual;
  out.values = Vector::Ones(static_cast<Eigen::Index>(problem.size()));
  std::vector<bool> band(problem.size(), false);
  for (std::size_t i : difficult.ambiguous) band[i] = true;
  const Vector& q = dual.q;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto j = live_mirror(problem, i);
    const bool in_d = difficult.contains(i);
    if (j && (in_d || band[i])) {
      const double qj = q[static_cast<Eigen::Index>(*j)];
      if (qj + q[ii] > 0.0) out.values[ii] = qj / (qj + q[ii]);
      continue;
    }
    if (!in_d) {
      if (band[i]) out.flagged.push_back(i);
      continue;
    }
    const double qi = q[ii];
    if (!(qi > 0.0 && qi < loss.conjugate_domain_upper())) {
      throw DomainError("dual value of unmirrored point " + std::to_string(i) + " is on the domain boundary");
    }
    const double partner = loss.deriv(-loss.conjugate_deriv(qi));
    out.values[ii] = partner / (partner + qi);
    if (band[i]) out.flagged.push_back(i);
  }
  return out;
}

EtaMu eta_mu(const Problem& problem) {
  EtaMu out;
  out.model.source = CondSource::TrueEta;
  out.model.values = Vector::Ones(static_cast<Eigen::Index>(problem.size()));
  out.mirrored.assign(problem.size(), false);
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const auto j = live_mirror(problem, i);
    const double mi = problem.measure().mass(i);
    if (j && mi > 0.0) {
      out.mirrored[i] = true;
      out.degenerate = false;
      out.model.values[static_cast<Eigen::Index>(i)] = mi / (mi + problem.measure().mass(*j));
    }
  }
  return out;
}

double l1_distance(const CondModel& a, const CondModel& b, const FiniteMeasure& measure) {
  if (a.values.size() != b.values.size() || static_cast<std::size_t>(a.values.size()) != measure.size()) {
    throw DimensionError("models are defined on different supports");
  }
  return measure.masses().dot((a.values - b.values).cwiseAbs());
}

double zero_one_risk(const Problem& problem, const Vector& w) {
  const double total = total_or_throw(problem.measure());
  const Vector score = problem.hypotheses().matrix() * w;
  double err = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const int pred = score[static_cast<Eigen::Index>(i)] >= 0.0 ? 1 : -1;
    if (pred != problem.measure().point(i).y) err += problem.measure().mass(i);
  }
  return err / total;
}

double zero_one_risk(const Problem& problem, const CondModel& model) {
  check_support(problem, model);
  const double total = total_or_throw(problem.measure());
  double err = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const int pred = model.positive(problem, i) - 0.5 >= 0.0 ? 1 : -1;
    if (pred != problem.measure().point(i).y) err += problem.measure().mass(i);
  }
  return err / total;
}

ZoGapTerms zo_gap_terms(const Problem& problem, const CondModel& eta_bar_model, const CondModel& eta_w_model,
                        const EtaMu& truth) {
  check_support(problem, eta_bar_model);
  check_support(problem, eta_w_model);
  check_support(problem, truth.model);
  const double total = total_or_throw(problem.measure());
  ZoGapTerms out;
  out.degenerate = truth.degenerate;
  std::vector<bool> in_lambda(problem.size(), false);
  for (std::size_t i = 0; i < problem.size(); ++i) {
    if (problem.measure().mass(i) > 0.0 && std::abs(eta_bar_model.values[static_cast<Eigen::Index>(i)] - 0.5) <= 1e-9) {
      in_lambda[i] = true;
      if (const auto& j = problem.mirror()[i]) in_lambda[*j] = true;
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    if (!in_lambda[i]) continue;
    out.lambda_set.push_back(i);
    const auto& j = problem.mirror()[i];
    // Visit each x once, through its lowest index.
    if (j && *j < i) continue;
    double mass_x = problem.measure().mass(i);
    if (j) mass_x += problem.measure().mass(*j);
    const double eta1 = truth.model.positive(problem, i);
    if (eta_w_model.positive(problem, i) < 0.5) sum += (2.0 * eta1 - 1.0) * mass_x;
  }
  out.star = std::abs(sum) / total;
  return out;
}

}  // namespace rdl
