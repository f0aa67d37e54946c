#ifndef RDL_ETABAR_HPP_
#define RDL_ETABAR_HPP_

#include <cstddef>
#include <vector>

#include "rdl/dual.hpp"
#include "rdl/measure.hpp"
#include "rdl/structure.hpp"

namespace rdl {

enum class CondSource { FromWeights, FromDual, TrueEta };

// values[i] estimates Pr[Y = y_i | x_i] for support point i.
struct CondModel {
  Vector values;
  CondSource source = CondSource::FromWeights;
  // Points whose value used a fallback (dual value inside the threshold band
  // without a mirror).
  std::vector<std::size_t> flagged;

  // Pr[Y = +1 | x_i].
  double positive(const Problem& problem, std::size_t i) const;
};

// values_i = link(-margin_i). Hinge is rejected.
CondModel eta_w(const Problem& problem, const Vector& w);

// Mirrored difficult points: q_j / (q_j + q_i). Unmirrored difficult points
// use the emulated partner l'(-(l*)'(q_i)). Easy points get 1.
CondModel eta_bar(const Problem& problem, const DualSolution& dual, const DifficultSet& difficult);

// The true conditional probability of each point's label, mass(x, y) / mu_X(x).
struct EtaMu {
  CondModel model;
  std::vector<bool> mirrored;
  bool degenerate = true;  // no x carries both labels
};
EtaMu eta_mu(const Problem& problem);

double l1_distance(const CondModel& a, const CondModel& b, const FiniteMeasure& measure);

// Mass-weighted fraction of points with y != sign(score), sign(0) = +1.
double zero_one_risk(const Problem& problem, const Vector& w);
double zero_one_risk(const Problem& problem, const CondModel& model);

struct ZoGapTerms {
  std::vector<std::size_t> lambda_set;  // support points whose x lies in Lambda
  double star = 0.0;
  bool degenerate = false;
};

// |sum over x in Lambda of (2 eta_mu(x,1) - 1) 1[eta_w(x,1) < 1/2] mu_X(x)|,
// normalized by total mass like zero_one_risk.
ZoGapTerms zo_gap_terms(const Problem& problem, const CondModel& eta_bar_model, const CondModel& eta_w_model,
                        const EtaMu& truth);

}  // namespace rdl

#endif  // RDL_ETABAR_HPP_
