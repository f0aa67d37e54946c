#include "rdl/fixtures.hpp"

#include <cmath>
#include <random>

#include "rdl/error.hpp"

namespace rdl::fixtures {
namespace {

LabeledPoint pt(std::initializer_list<double> x, int y, std::size_t id) {
  LabeledPoint p;
  p.x = Eigen::Map<const Vector>(x.begin(), static_cast<Eigen::Index>(x.size()));
  p.y = y;
  p.id = id;
  return p;
}

Problem coordinates_problem(std::vector<LabeledPoint> pts, std::vector<double> masses, Loss loss) {
  FiniteMeasure m(std::move(pts), std::move(masses));
  HypothesisSet h = HypothesisSet::coordinates(m);
  return Problem(std::move(m), std::move(h), loss);
}

void cloud(std::mt19937_64& rng, std::size_t n, double sign, std::vector<LabeledPoint>* out) {
  std::uniform_real_distribution<double> x1(0.2, 0.8);
  std::uniform_real_distribution<double> x2(-0.6, 0.6);
  for (std::size_t k = 0; k < n; ++k) {
    out->push_back(pt({sign * x1(rng), x2(rng)}, sign > 0 ? 1 : -1, out->size()));
  }
}

}  // namespace

Problem mirror(Loss loss) {
  return coordinates_problem({pt({1.0}, 1, 0), pt({1.0}, -1, 1)}, {0.5, 0.5}, loss);
}

Problem single_point(Loss loss) { return coordinates_problem({pt({1.0}, 1, 0)}, {1.0}, loss); }

Problem margins(Loss loss, std::size_t per_cloud) {
  std::mt19937_64 rng(7);
  std::vector<LabeledPoint> pts;
  cloud(rng, per_cloud, 1.0, &pts);
  cloud(rng, per_cloud, -1.0, &pts);
  std::vector<double> masses(pts.size(), 1.0 / static_cast<double>(pts.size()));
  return coordinates_problem(std::move(pts), std::move(masses), loss);
}

Problem difficult(Loss loss, std::size_t per_cloud) {
  std::vector<LabeledPoint> pts;
  if (per_cloud == 1) {
    pts.push_back(pt({0.7, 0.3}, 1, 0));
    pts.push_back(pt({-0.7, -0.2}, -1, 1));
  } else {
    std::mt19937_64 rng(11);
    cloud(rng, per_cloud, 1.0, &pts);
    cloud(rng, per_cloud, -1.0, &pts);
  }
  const double ts[] = {-0.6, -0.3, 0.0, 0.3, 0.6};
  const int ys[] = {1, -1, 1, -1, 1};
  for (int k = 0; k < 5; ++k) pts.push_back(pt({0.0, ts[k]}, ys[k], pts.size()));
  std::vector<double> masses(pts.size(), 1.0 / static_cast<double>(pts.size()));
  return coordinates_problem(std::move(pts), std::move(masses), loss);
}

Problem zo(double epsilon, Loss loss) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in [0, 1)");
  const double denom = 2.0 - epsilon;
  return coordinates_problem({pt({-1.0}, 1, 0), pt({1.0 - epsilon}, 1, 1)},
                             {(1.0 - epsilon) / denom, 1.0 / denom}, loss);
}

Problem random_instance(std::uint64_t seed, Loss loss, std::size_t n, std::size_t d, double mirror_fraction) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_real_distribution<double> mass(0.1, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution mirrored(mirror_fraction);
  std::vector<LabeledPoint> pts;
  while (pts.size() < n) {
    LabeledPoint p;
    p.x.resize(static_cast<Eigen::Index>(d));
    for (auto& v : p.x) v = unif(rng);
    p.y = coin(rng) ? 1 : -1;
    p.id = pts.size();
    pts.push_back(p);
    if (pts.size() < n && mirrored(rng)) {
      p.y = -p.y;
      p.id = pts.size();
      pts.push_back(p);
    }
  }
  std::vector<double> masses(n);
  double total = 0.0;
  for (auto& m : masses) total += (m = mass(rng));
  for (auto& m : masses) m /= total;
  return coordinates_problem(std::move(pts), std::move(masses), loss);
}

Problem random_small(std::uint64_t seed, Loss loss) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
  const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  return random_instance(rng(), loss, n, d, 0.3);
}

Problem mixed(Loss loss) {
  std::vector<LabeledPoint> pts;
  std::vector<double> masses;
  const double grid_mass = 0.8 / 80.0;
  for (int a = 0; a < 10; ++a) {
    for (int b = 0; b < 8; ++b) {
      const double x1 = -0.9 + 0.2 * a;
      const double x2 = -0.875 + 0.25 * b;
      const double f = 1.5 * x1 - x2 + 2.0 * x1 * x2 + std::sin(3.0 * x2);
      const double eta = 1.0 / (1.0 + std::exp(-f));
      pts.push_back(pt({x1, x2, 0.0}, 1, pts.size()));
      masses.push_back(grid_mass * eta);
      pts.push_back(pt({x1, x2, 0.0}, -1, pts.size()));
      masses.push_back(grid_mass * (1.0 - eta));
    }
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 0; k < 40; ++k) {
    const int y = k % 2 == 0 ? 1 : -1;
    pts.push_back(pt({unif(rng), unif(rng), 0.5 * y}, y, pts.size()));
    masses.push_back(0.2 / 40.0);
  }
  return coordinates_problem(std::move(pts), std::move(masses), loss);
}

}  // namespace rdl::fixtures
