#include "rdl/measure.hpp"

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "rdl/error.hpp"

namespace rdl {
namespace {

std::vector<std::uint64_t> bit_key(const Vector& x, int y) {
  std::vector<std::uint64_t> key;
  key.reserve(static_cast<std::size_t>(x.size()) + 1);
  for (Eigen::Index j = 0; j < x.size(); ++j) key.push_back(std::bit_cast<std::uint64_t>(x[j]));
  key.push_back(static_cast<std::uint64_t>(y + 1));
  return key;
}

void check_indices(std::span<const std::size_t> index_set, std::size_t n) {
  for (std::size_t i : index_set) {
    if (i >= n) throw DimensionError("index " + std::to_string(i) + " outside support of size " + std::to_string(n));
  }
}

}  // namespace

FiniteMeasure::FiniteMeasure(std::vector<LabeledPoint> points, std::vector<double> masses) {
  if (points.size() != masses.size()) {
    throw DimensionError("measure needs one mass per point");
  }
  std::map<std::vector<std::uint64_t>, std::size_t> seen;
  std::vector<double> merged_masses;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& p = points[i];
    if (p.y != 1 && p.y != -1) throw DomainError("labels must be -1 or +1");
    if (!(masses[i] >= 0.0) || !std::isfinite(masses[i])) {
      throw DomainError("masses must be finite and nonnegative");
    }
    if (!points_.empty() && p.x.size() != points_.front().x.size()) {
      throw DimensionError("all points must share one feature dimension");
    }
    auto [it, inserted] = seen.emplace(bit_key(p.x, p.y), points_.size());
    if (inserted) {
      points_.push_back(std::move(p));
      merged_masses.push_back(masses[i]);
    } else {
      merged_masses[it->second] += masses[i];
    }
  }
  masses_ = Eigen::Map<Vector>(merged_masses.data(), static_cast<Eigen::Index>(merged_masses.size()));
  total_mass_ = masses_.sum();
}

FiniteMeasure FiniteMeasure::empirical(std::vector<LabeledPoint> points) {
  const double m = points.empty() ? 0.0 : 1.0 / static_cast<double>(points.size());
  std::vector<double> masses(points.size(), m);
  return FiniteMeasure(std::move(points), std::move(masses));
}

std::size_t FiniteMeasure::dim() const {
  return points_.empty() ? 0 : static_cast<std::size_t>(points_.front().x.size());
}

FiniteMeasure FiniteMeasure::with_masses(Vector masses) const {
  if (static_cast<std::size_t>(masses.size()) != size()) {
    throw DimensionError("with_masses needs one mass per support point");
  }
  if ((masses.array() < 0.0).any()) throw DomainError("masses must be nonnegative");
  FiniteMeasure out;
  out.points_ = points_;
  out.masses_ = std::move(masses);
  out.total_mass_ = out.masses_.sum();
  return out;
}

FiniteMeasure FiniteMeasure::restrict(std::span<const std::size_t> index_set) const {
  check_indices(index_set, size());
  Vector m = Vector::Zero(masses_.size());
  for (std::size_t i : index_set) m[static_cast<Eigen::Index>(i)] = masses_[static_cast<Eigen::Index>(i)];
  return with_masses(std::move(m));
}

double FiniteMeasure::mass_of(std::span<const std::size_t> index_set) const {
  check_indices(index_set, size());
  std::vector<bool> in(size(), false);
  for (std::size_t i : index_set) in[i] = true;
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (in[i]) total += mass(i);
  }
  return total;
}

FiniteMeasure FiniteMeasure::conditional(std::span<const std::size_t> index_set) const {
  FiniteMeasure r = restrict(index_set);
  if (!(r.total_mass() > 0.0)) throw EmptyMassError("conditional measure on a null set");
  return r.with_masses(r.masses() / r.total_mass());
}

FiniteMeasure FiniteMeasure::normalized() const {
  if (!(total_mass_ > 0.0)) throw EmptyMassError("cannot normalize a zero measure");
  return with_masses(masses_ / total_mass_);
}

HypothesisSet::HypothesisSet(Matrix matrix) : matrix_(std::move(matrix)) {
  if (!matrix_.allFinite() || (matrix_.array().abs() > 1.0).any()) {
    throw DomainError("hypothesis values must lie in [-1, 1]");
  }
}

HypothesisSet HypothesisSet::coordinates(const FiniteMeasure& measure) {
  Matrix m(static_cast<Eigen::Index>(measure.size()), static_cast<Eigen::Index>(measure.dim()));
  for (std::size_t i = 0; i < measure.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = measure.point(i).x.transpose();
  }
  return HypothesisSet(std::move(m));
}

std::vector<std::optional<std::size_t>> group_mirrors(const std::vector<LabeledPoint>& points) {
  std::map<std::vector<std::uint64_t>, std::size_t> by_key;
  for (std::size_t i = 0; i < points.size(); ++i) by_key.emplace(bit_key(points[i].x, points[i].y), i);
  std::vector<std::optional<std::size_t>> mirror(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto it = by_key.find(bit_key(points[i].x, -points[i].y));
    if (it != by_key.end()) mirror[i] = it->second;
  }
  return mirror;
}

Problem::Problem(FiniteMeasure measure, HypothesisSet hypotheses, Loss loss)
    : measure_(std::move(measure)), hypotheses_(std::move(hypotheses)), loss_(loss) {
  if (hypotheses_.rows() != measure_.size()) {
    throw DimensionError("hypothesis matrix needs one row per support point");
  }
  mirror_ = group_mirrors(measure_.points());
  margin_matrix_ = hypotheses_.matrix();
  for (std::size_t i = 0; i < measure_.size(); ++i) {
    margin_matrix_.row(static_cast<Eigen::Index>(i)) *= -static_cast<double>(measure_.point(i).y);
  }
}

Vector Problem::apply_A(const Vector& w) const {
  if (static_cast<std::size_t>(w.size()) != dim()) {
    throw DimensionError("weight vector has length " + std::to_string(w.size()) + ", expected " +
                         std::to_string(dim()));
  }
  return margin_matrix_ * w;
}

Problem Problem::with_loss(Loss loss) const {
  Problem p = *this;
  p.loss_ = loss;
  return p;
}

Problem Problem::with_measure(const FiniteMeasure& measure) const {
  if (measure.size() != size()) throw DimensionError("with_measure needs the same support");
  Problem p = *this;
  p.measure_ = measure;
  return p;
}

Problem Problem::restricted(std::span<const std::size_t> index_set) const {
  return with_measure(measure_.restrict(index_set));
}

Problem Problem::normalized() const { return with_measure(measure_.normalized()); }

Problem Problem::resampled(const FiniteMeasure& sample) const {
  Matrix h(static_cast<Eigen::Index>(sample.size()), static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const std::size_t src = sample.point(i).id;
    if (src >= size()) throw DimensionError("sample id outside the population support");
    h.row(static_cast<Eigen::Index>(i)) = hypotheses_.matrix().row(static_cast<Eigen::Index>(src));
  }
  return Problem(sample, HypothesisSet(std::move(h)), loss_);
}

FiniteMeasure sample(const FiniteMeasure& measure, std::size_t n, std::uint64_t seed) {
  if (!(measure.total_mass() > 0.0)) throw EmptyMassError("cannot sample from a zero measure");
  if (n == 0) throw DomainError("sample size must be at least 1");
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(measure.masses().data(),
                                               measure.masses().data() + measure.masses().size());
  std::vector<std::size_t> counts(measure.size(), 0);
  for (std::size_t k = 0; k < n; ++k) ++counts[pick(rng)];
  std::vector<LabeledPoint> points;
  std::vector<double> masses;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    if (counts[i] == 0) continue;
    LabeledPoint p = measure.point(i);
    p.id = i;
    points.push_back(std::move(p));
    masses.push_back(static_cast<double>(counts[i]) / static_cast<double>(n));
  }
  return FiniteMeasure(std::move(points), std::move(masses));
}

namespace {

int parse_label(const std::string& token, std::size_t line) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || errno != 0) {
    throw ParseError("malformed label '" + token + "'", line);
  }
  if (v == 1.0) return 1;
  if (v == -1.0 || v == 0.0) return -1;
  throw DomainError("label '" + token + "' outside {-1, 0, +1} (line " + std::to_string(line) + ")");
}

double parse_number(const std::string& token, std::size_t line) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end == token.c_str() || *end != '\0' || errno != 0 || !std::isfinite(v)) {
    throw ParseError("malformed number '" + token + "'", line);
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Dataset finish_dataset(std::vector<std::vector<double>> rows, std::vector<int> labels, std::size_t d) {
  if (rows.empty()) throw ParseError("empty dataset", 0);
  std::vector<double> scale(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, std::abs(r[j]));
    if (m > 0.0) scale[j] = m;
  }
  std::vector<LabeledPoint> points;
  points.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    LabeledPoint p;
    p.x.resize(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) p.x[static_cast<Eigen::Index>(j)] = rows[i][j] / scale[j];
    p.y = labels[i];
    p.id = i;
    points.push_back(std::move(p));
  }
  Dataset ds;
  ds.rows_read = rows.size();
  ds.measure = FiniteMeasure::empirical(std::move(points));
  ds.hypotheses = HypothesisSet::coordinates(ds.measure);
  ds.scale = std::move(scale);
  return ds;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return in;
}

}  // namespace

Dataset load_libsvm(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::vector<std::pair<std::size_t, double>>> sparse;
  std::vector<int> labels;
  std::size_t d = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ss(t);
    std::string token;
    ss >> token;
    labels.push_back(parse_label(token, line_no));
    std::vector<std::pair<std::size_t, double>> entries;
    while (ss >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) throw ParseError("expected idx:val, got '" + token + "'", line_no);
      const double idx = parse_number(token.substr(0, colon), line_no);
      if (idx < 1.0 || idx != std::floor(idx)) throw ParseError("feature index must be a positive integer", line_no);
      const auto j = static_cast<std::size_t>(idx);
      entries.emplace_back(j - 1, parse_number(token.substr(colon + 1), line_no));
      d = std::max(d, j);
    }
    sparse.push_back(std::move(entries));
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(sparse.size());
  for (const auto& entries : sparse) {
    std::vector<double> r(d, 0.0);
    for (const auto& [j, v] : entries) r[j] = v;
    rows.push_back(std::move(r));
  }
  return finish_dataset(std::move(rows), std::move(labels), d);
}

Dataset load_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in = open_or_throw(path);
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) header = split(trim(line));
  }
  if (header.empty()) throw ParseError("empty dataset", 0);
  std::size_t label_idx = header.size();
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == label_column) label_idx = j;
  }
  if (label_idx == header.size()) {
    char* end = nullptr;
    const long v = std::strtol(label_column.c_str(), &end, 10);
    if (end == label_column.c_str() || *end != '\0' || v < 0 || static_cast<std::size_t>(v) >= header.size()) {
      throw ParseError("label column '" + label_column + "' not found in header", 1);
    }
    label_idx = static_cast<std::size_t>(v);
  }
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(trim(line));
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()),
                       line_no);
    }
    std::vector<double> r;
    r.reserve(cells.size() - 1);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j == label_idx) {
        labels.push_back(parse_label(cells[j], line_no));
      } else {
        r.push_back(parse_number(cells[j], line_no));
      }
    }
    rows.push_back(std::move(r));
  }
  return finish_dataset(std::move(rows), std::move(labels), header.size() - 1);
}

}  // namespace rdl
