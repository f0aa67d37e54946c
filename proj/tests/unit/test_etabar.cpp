#include <cmath>
#include <random>

#include "doctest.h"
#include "rdl/dual.hpp"
#include "rdl/error.hpp"
#include "rdl/etabar.hpp"
#include "rdl/fixtures.hpp"
#include "rdl/primal.hpp"
#include "rdl/structure.hpp"
#include "util.hpp"

using namespace rdl;
using rdl::testing::make_problem;
using rdl::testing::point;
using rdl::testing::vec;

namespace {
const Loss kLogistic(LossKind::Logistic);
const Loss kExp(LossKind::Exponential);

CondModel eta_bar_of(const Problem& p) {
  const DualSolution d = solve_dual(p);
  return eta_bar(p, d, difficult_set(p, d));
}
}  // namespace

TEST_CASE("eta_w") {
  const Problem p = fixtures::random_instance(1, kLogistic, 10, 2, 0.3);
  CHECK(eta_w(p, Vector::Zero(2)).values == Vector::Constant(10, 0.5));
  // y <x, w> = 2 for the single positive point.
  const Problem single = fixtures::single_point(kLogistic);
  CHECK(eta_w(single, vec({2.0})).values[0] == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-12));
  CHECK_THROWS_AS(eta_w(single.with_loss(Loss(LossKind::Hinge)), vec({1.0})), UnsupportedLossError);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Problem r = fixtures::random_instance(s, kExp, 15, 3, 0.3);
    Vector w(3);
    for (auto& v : w) v = g(rng);
    const CondModel m = eta_w(r, w);
    const Vector margins = r.apply_A(w);
    for (Eigen::Index i = 0; i < 15; ++i) {
      const double score = -margins[i];
      CHECK((m.values[i] > 0.5) == (score > 0));
      CHECK((m.values[i] < 0.5) == (score < 0));
    }
  }
}

TEST_CASE("eta_bar examples") {
  const CondModel m = eta_bar_of(fixtures::mirror(kLogistic));
  CHECK(m.values[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(m.values[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(eta_bar_of(fixtures::single_point(kLogistic)).values[0] == 1.0);
  for (double eps : {0.0, 0.25, 0.5, 0.9}) {
    const CondModel z = eta_bar_of(fixtures::zo(eps, kLogistic));
    CHECK(z.values[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(z.values[1] == doctest::Approx(0.5).epsilon(1e-8));
  }
  // Unmirrored exponential point: the emulated partner is 1 / q.
  const CondModel e = eta_bar_of(fixtures::zo(0.5, kExp));
  CHECK(e.values[0] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("eta_bar on mirrored pairs sums to one") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    for (const Loss& loss : {kLogistic, kExp}) {
      const Problem p = fixtures::random_small(s, loss);
      const DualSolution d = solve_dual(p);
      const DifficultSet ds = difficult_set(p, d);
      const CondModel m = eta_bar(p, d, ds);
      CHECK(m.values.minCoeff() >= 0.0);
      CHECK(m.values.maxCoeff() <= 1.0);
      for (std::size_t i : ds.indices) {
        if (const auto j = p.mirror()[i]; j && ds.contains(*j)) {
          CHECK(std::abs(m.values[static_cast<Eigen::Index>(i)] + m.values[static_cast<Eigen::Index>(*j)] - 1.0) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("eta_bar agrees with eta_w at an attained optimum") {
  int attained = 0;
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Problem p = fixtures::random_small(s, kLogistic);
    SolverConfig c;
    c.step_rule = StepRule::Newton;
    c.max_iters = 500;
    const PrimalTrajectory t = minimize(p, c);
    if (t.termination != Termination::GradientSmall) continue;
    ++attained;
    CHECK(l1_distance(eta_bar_of(p), eta_w(p, t.final_iterate().w), p.measure()) <= 1e-4);
  }
  CHECK(attained > 0);
}

TEST_CASE("l1 distance") {
  const Problem p = make_problem({point({1.0}, 1), point({0.5}, 1)}, {0.5, 0.5}, kLogistic);
  CondModel a, b;
  a.values = vec({0.5, 0.5});
  b.values = vec({0.9, 0.1});
  CHECK(l1_distance(a, a, p.measure()) == 0.0);
  CHECK(l1_distance(a, b, p.measure()) == doctest::Approx(0.4).epsilon(1e-15));
  CondModel one, zero;
  one.values = Vector::Ones(2);
  zero.values = Vector::Zero(2);
  CHECK(l1_distance(one, zero, p.measure()) == 1.0);
  CondModel short_model;
  short_model.values = Vector::Ones(1);
  CHECK_THROWS_AS(l1_distance(one, short_model, p.measure()), DimensionError);
}

TEST_CASE("zero-one risk") {
  const Problem m = fixtures::margins(kLogistic);
  CHECK(zero_one_risk(m, vec({1.0, 0.0})) == 0.0);
  const Problem r = fixtures::random_instance(6, kLogistic, 12, 2, 0.3);
  double neg = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r.measure().point(i).y < 0) neg += r.measure().mass(i);
  }
  CHECK(zero_one_risk(r, Vector::Zero(2)) == doctest::Approx(neg / r.measure().total_mass()).epsilon(1e-14));
  const Problem z = fixtures::zo(0.5, kLogistic);
  CHECK(zero_one_risk(z, vec({-1.0})) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(zero_one_risk(z, vec({0.5})) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("zo gap terms") {
  const Problem z = fixtures::zo(0.5, kLogistic);
  const CondModel bar = eta_bar_of(z);
  const EtaMu truth = eta_mu(z);
  CHECK(truth.degenerate);
  const ZoGapTerms odd = zo_gap_terms(z, bar, eta_w(z, vec({-1.0})), truth);
  CHECK(odd.lambda_set.size() == 2);
  CHECK(odd.star == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  const ZoGapTerms even = zo_gap_terms(z, bar, eta_w(z, vec({0.5})), truth);
  CHECK(even.star == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const Problem single = fixtures::single_point(kLogistic);
  const ZoGapTerms none = zo_gap_terms(single, eta_bar_of(single), eta_w(single, vec({1.0})), eta_mu(single));
  CHECK(none.lambda_set.empty());
  CHECK(none.star == 0.0);
}

TEST_CASE("eta_mu on mirrored data") {
  const Problem p = make_problem({point({1.0}, 1), point({1.0}, -1), point({0.5}, 1)}, {0.3, 0.1, 0.6}, kLogistic);
  const EtaMu t = eta_mu(p);
  CHECK_FALSE(t.degenerate);
  CHECK(t.model.values[0] == doctest::Approx(0.75));
  CHECK(t.model.values[1] == doctest::Approx(0.25));
  CHECK(t.model.values[2] == 1.0);
  CHECK(t.mirrored[0]);
  CHECK_FALSE(t.mirrored[2]);
}
