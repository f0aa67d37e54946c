#ifndef RDL_MEASURE_HPP_
#define RDL_MEASURE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rdl/losses.hpp"

namespace rdl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct LabeledPoint {
  Vector x;
  int y = 1;  // -1 or +1
  std::size_t id = 0;
};

// A finitely supported measure over X x {-1,+1}. Duplicate (x, y) pairs are
// merged at construction by adding their masses; the first occurrence keeps
// its id. Masses are stored unnormalized.
class FiniteMeasure {
 public:
  FiniteMeasure() = default;
  FiniteMeasure(std::vector<LabeledPoint> points, std::vector<double> masses);

  // Uniform masses 1/n.
  static FiniteMeasure empirical(std::vector<LabeledPoint> points);

  std::size_t size() const { return points_.size(); }
  const std::vector<LabeledPoint>& points() const { return points_; }
  const LabeledPoint& point(std::size_t i) const { return points_[i]; }
  const Vector& masses() const { return masses_; }
  double mass(std::size_t i) const { return masses_[static_cast<Eigen::Index>(i)]; }
  double total_mass() const { return total_mass_; }
  std::size_t dim() const;

  // mu_C: same support, masses outside `index_set` set to zero.
  FiniteMeasure restrict(std::span<const std::size_t> index_set) const;
  // mu_{|C} = mu_C / mu(C). Throws EmptyMassError when mu(C) = 0.
  FiniteMeasure conditional(std::span<const std::size_t> index_set) const;
  // Same support with the given masses (no merging, no reordering).
  FiniteMeasure with_masses(Vector masses) const;
  FiniteMeasure normalized() const;
  double mass_of(std::span<const std::size_t> index_set) const;

 private:
  std::vector<LabeledPoint> points_;
  Vector masses_;
  double total_mass_ = 0.0;
};

// n_points x d matrix of hypothesis values h_j(x_i), every entry in [-1, 1].
class HypothesisSet {
 public:
  HypothesisSet() = default;
  explicit HypothesisSet(Matrix matrix);

  // h_j(x) = x_j.
  static HypothesisSet coordinates(const FiniteMeasure& measure);

  const Matrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.cols()); }
  std::size_t rows() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  Matrix matrix_;
};

// mirror[i] = j iff x_j == x_i bitwise and y_j = -y_i.
std::vector<std::optional<std::size_t>> group_mirrors(const std::vector<LabeledPoint>& points);

class Problem {
 public:
  Problem(FiniteMeasure measure, HypothesisSet hypotheses, Loss loss);

  const FiniteMeasure& measure() const { return measure_; }
  const HypothesisSet& hypotheses() const { return hypotheses_; }
  const Loss& loss() const { return loss_; }
  const std::vector<std::optional<std::size_t>>& mirror() const { return mirror_; }
  std::size_t size() const { return measure_.size(); }
  std::size_t dim() const { return hypotheses_.dim(); }

  // Row i is -y_i h(x_i), so that margins = margin_matrix() * w.
  const Matrix& margin_matrix() const { return margin_matrix_; }

  // (Aw)_i = -y_i <h(x_i), w>. Throws DimensionError on size mismatch.
  Vector apply_A(const Vector& w) const;

  Problem with_loss(Loss loss) const;
  // Same support, new masses.
  Problem with_measure(const FiniteMeasure& measure) const;
  Problem restricted(std::span<const std::size_t> index_set) const;
  Problem normalized() const;
  // A problem over a sample drawn by `sample` from this problem's measure;
  // hypothesis rows are gathered through the sample's point ids.
  Problem resampled(const FiniteMeasure& sample) const;

 private:
  FiniteMeasure measure_;
  HypothesisSet hypotheses_;
  Loss loss_;
  std::vector<std::optional<std::size_t>> mirror_;
  Matrix margin_matrix_;
};

// n i.i.d. draws proportional to mass, returned as an empirical measure
// (uniform 1/n, duplicates merged). Point ids are the source positions in
// `measure`. Deterministic for a fixed seed.
FiniteMeasure sample(const FiniteMeasure& measure, std::size_t n, std::uint64_t seed);

struct Dataset {
  FiniteMeasure measure;
  HypothesisSet hypotheses;      // coordinate hypotheses on the scaled features
  std::vector<double> scale;     // per-column max-abs factors (1 for zero columns)
  std::size_t rows_read = 0;
};

// libsvm sparse text: "label idx:val ..." with 1-based indices. Labels in
// {-1,+1}; 0 is remapped to -1. Features are max-abs scaled to [-1, 1].
Dataset load_libsvm(const std::string& path);
// CSV with a header row. `label_column` is a header name or a 0-based index.
Dataset load_csv(const std::string& path, const std::string& label_column);

}  // namespace rdl

#endif  // RDL_MEASURE_HPP_
