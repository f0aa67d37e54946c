#ifndef RDL_TESTS_UTIL_HPP_
#define RDL_TESTS_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rdl/measure.hpp"

namespace rdl::testing {

inline LabeledPoint point(std::vector<double> x, int y, std::size_t id = 0) {
  LabeledPoint p;
  p.x = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
  p.y = y;
  p.id = id;
  return p;
}

// Coordinate hypotheses over the given points.
inline Problem make_problem(std::vector<LabeledPoint> pts, std::vector<double> masses, Loss loss) {
  FiniteMeasure mu(std::move(pts), std::move(masses));
  HypothesisSet h = HypothesisSet::coordinates(mu);
  return Problem(std::move(mu), std::move(h), loss);
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Temporary file removed at scope exit.
class TempFile {
 public:
  TempFile(const std::string& name, const std::string& contents)
      : path_(std::filesystem::temp_directory_path() / ("rdl_test_" + name)) {
    std::ofstream(path_) << contents;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

// sup_r [r s - f(r)] over a uniform grid followed by a local golden-section
// refinement around the best grid cell.
inline double grid_sup(const std::function<double(double)>& f, double s, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double best = -INFINITY;
  double arg = lo;
  for (int k = 0; k <= n; ++k) {
    const double r = lo + h * k;
    const double v = r * s - f(r);
    if (v > best) {
      best = v;
      arg = r;
    }
  }
  double a = std::max(lo, arg - h), b = std::min(hi, arg + h);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (c * s - f(c) > d * s - f(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  const double m = 0.5 * (a + b);
  return std::max(best, m * s - f(m));
}

}  // namespace rdl::testing

#endif  // RDL_TESTS_UTIL_HPP_
