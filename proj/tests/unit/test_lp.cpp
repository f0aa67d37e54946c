#include <random>

#include "doctest.h"
#include "rdl/lp.hpp"

using namespace rdl;

TEST_CASE("small programs with known optima") {
  Matrix a(1, 3);
  a << 1, 1, 1;
  Vector b(1), c(3);
  b << 1;
  c << -1, -2, 0;
  const LpResult r = solve_lp(a, b, c);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-2.0));
  CHECK(r.x[1] == doctest::Approx(1.0));

  Matrix inf_a(1, 1);
  inf_a << 1;
  Vector inf_b(1), inf_c(1);
  inf_b << -1;
  inf_c << 0;
  CHECK(solve_lp(inf_a, inf_b, inf_c).status == LpStatus::Infeasible);

  Matrix ub_a(1, 2);
  ub_a << 1, -1;
  Vector ub_b(1), ub_c(2);
  ub_b << 0;
  ub_c << -1, 0;
  CHECK(solve_lp(ub_a, ub_b, ub_c).status == LpStatus::Unbounded);
}

// Vertex enumeration over all 2-column bases.
TEST_CASE("random programs match vertex enumeration") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix a(2, 5);
    for (auto& v : a.reshaped()) v = u(rng);
    Vector x0(5), c(5);
    for (auto& v : x0) v = pos(rng);
    for (auto& v : c) v = pos(rng) - 0.2;
    // Bounded: add a budget row sum x = sum x0.
    Matrix ab(3, 5);
    ab << a, Matrix::Ones(1, 5);
    const Vector b = ab * x0;
    double best = INFINITY;
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) {
        for (int k = j + 1; k < 5; ++k) {
          Matrix basis(3, 3);
          basis << ab.col(i), ab.col(j), ab.col(k);
          if (std::abs(basis.determinant()) < 1e-12) continue;
          const Vector xb = basis.lu().solve(b);
          if (xb.minCoeff() < -1e-12) continue;
          best = std::min(best, c[i] * xb[0] + c[j] * xb[1] + c[k] * xb[2]);
        }
      }
    }
    const LpResult r = solve_lp(ab, b, c);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(best).epsilon(1e-8));
    CHECK((ab * r.x - b).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(r.x.minCoeff() >= -1e-12);
  }
}
