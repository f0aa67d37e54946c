#include <cmath>
#include <random>

#include "doctest.h"
#include "rdl/error.hpp"
#include "rdl/fixtures.hpp"
#include "rdl/measure.hpp"
#include "util.hpp"

using namespace rdl;
using rdl::testing::make_problem;
using rdl::testing::point;
using rdl::testing::TempFile;
using rdl::testing::vec;

namespace {
const Loss kLogistic(LossKind::Logistic);
}

TEST_CASE("duplicates merge and keep total mass") {
  FiniteMeasure mu({point({1.0}, 1, 0), point({2.0}, -1, 1), point({1.0}, 1, 2)}, {0.1, 0.2, 0.3});
  REQUIRE(mu.size() == 2);
  CHECK(mu.mass(0) == doctest::Approx(0.4));
  CHECK(mu.point(0).id == 0);
  CHECK(std::abs(mu.total_mass() - 0.6) <= 1e-12 * 0.6);
  CHECK_THROWS_AS(FiniteMeasure({point({1.0}, 2)}, {1.0}), DomainError);
  CHECK_THROWS_AS(FiniteMeasure({point({1.0}, 1)}, {-1.0}), DomainError);
}

TEST_CASE("apply_A") {
  const Problem single = fixtures::single_point(kLogistic);
  CHECK(single.apply_A(vec({0.0})).isZero());
  CHECK(single.apply_A(vec({2.0}))[0] == -2.0);
  CHECK_THROWS_AS(single.apply_A(vec({1.0, 2.0})), DimensionError);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Problem p = fixtures::random_instance(s, kLogistic, 20, 4, 0.3);
    Vector w(4), v(4);
    for (auto& x : w) x = g(rng);
    for (auto& x : v) x = g(rng);
    const Vector m = p.apply_A(w);
    CHECK(m.cwiseAbs().maxCoeff() <= w.lpNorm<1>() + 1e-12);
    CHECK((p.apply_A(w + v) - m - p.apply_A(v)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("restrict and conditional") {
  std::vector<LabeledPoint> pts;
  for (int i = 0; i < 4; ++i) pts.push_back(point({static_cast<double>(i)}, 1, static_cast<std::size_t>(i)));
  const FiniteMeasure mu = FiniteMeasure::empirical(pts);
  const std::vector<std::size_t> all = {0, 1, 2, 3}, none = {}, half = {1, 3}, rest = {0, 2};
  CHECK(mu.restrict(all).masses() == mu.masses());
  CHECK(mu.restrict(none).total_mass() == 0.0);
  const FiniteMeasure c = mu.conditional(half);
  CHECK(c.mass(1) == 0.5);
  CHECK(c.mass(3) == 0.5);
  CHECK(c.mass(0) == 0.0);
  CHECK_THROWS_AS(mu.conditional(none), EmptyMassError);
  CHECK(std::abs(mu.restrict(half).total_mass() + mu.restrict(rest).total_mass() - mu.total_mass()) <= 1e-12);
  CHECK_THROWS_AS(mu.restrict(std::vector<std::size_t>{7}), DimensionError);
}

TEST_CASE("group_mirrors") {
  auto m = group_mirrors({point({1.0}, 1), point({1.0}, -1)});
  REQUIRE(m[0].has_value());
  CHECK(*m[0] == 1);
  CHECK(*m[1] == 0);
  CHECK_FALSE(group_mirrors({point({1.0}, 1)})[0].has_value());
  auto near = group_mirrors({point({1.0}, 1), point({1.0000001}, -1)});
  CHECK_FALSE(near[0].has_value());
  CHECK_FALSE(near[1].has_value());
}

TEST_CASE("mirror map is an involution") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Problem p = fixtures::random_instance(s, kLogistic, 12, 2, 0.5);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (const auto j = p.mirror()[i]) {
        REQUIRE(p.mirror()[*j].has_value());
        CHECK(*p.mirror()[*j] == i);
        CHECK(p.measure().point(i).x == p.measure().point(*j).x);
        CHECK(p.measure().point(i).y == -p.measure().point(*j).y);
      }
    }
  }
}

TEST_CASE("sampling") {
  const FiniteMeasure pm({point({1.0}, 1)}, {1.0});
  const FiniteMeasure s = sample(pm, 17, 3);
  CHECK(s.size() == 1);
  CHECK(s.total_mass() == doctest::Approx(1.0));

  const FiniteMeasure two({point({1.0}, 1), point({2.0}, 1)}, {0.9, 0.1});
  const FiniteMeasure a = sample(two, 1000, 9), b = sample(two, 1000, 9);
  CHECK(a.masses() == b.masses());
  const FiniteMeasure big = sample(two, 100000, 1);
  double first = 0.0;
  for (std::size_t i = 0; i < big.size(); ++i) {
    if (big.point(i).id == 0) first += big.mass(i);
  }
  CHECK(std::abs(first - 0.9) <= 0.01);

  CHECK_THROWS_AS(sample(pm.restrict(std::vector<std::size_t>{}), 5, 1), EmptyMassError);
}

TEST_CASE("hypothesis entries are bounded") {
  Matrix h(1, 1);
  h << 1.5;
  CHECK_THROWS_AS(HypothesisSet{h}, DomainError);
}

TEST_CASE("libsvm loader") {
  TempFile f("two.libsvm", "1 1:0.5\n-1 1:-0.5\n");
  const Dataset d = load_libsvm(f.path());
  REQUIRE(d.measure.size() == 2);
  CHECK(d.hypotheses.dim() == 1);
  CHECK(d.hypotheses.matrix()(0, 0) == 1.0);
  CHECK(d.hypotheses.matrix()(1, 0) == -1.0);
  CHECK(d.scale[0] == 0.5);

  TempFile empty("empty.libsvm", "");
  CHECK_THROWS_AS(load_libsvm(empty.path()), ParseError);

  TempFile bad("bad.libsvm", "1 1:0.5\n-1 x\n");
  try {
    load_libsvm(bad.path());
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  TempFile label("label.libsvm", "3 1:0.5\n");
  CHECK_THROWS_AS(load_libsvm(label.path()), DomainError);
  CHECK_THROWS_AS(load_libsvm("/nonexistent/file.libsvm"), ParseError);
}

TEST_CASE("csv loader") {
  TempFile f("z.csv", "a,label,b\n2,0,1\n-4,1,0\n1,1,0.5\n");
  const Dataset d = load_csv(f.path(), "label");
  REQUIRE(d.measure.size() == 3);
  CHECK(d.measure.point(0).y == -1);
  CHECK(d.measure.point(1).y == 1);
  CHECK(d.hypotheses.matrix().cwiseAbs().maxCoeff() <= 1.0);
  CHECK(d.hypotheses.matrix()(1, 0) == -1.0);
  const Dataset by_index = load_csv(f.path(), "1");
  CHECK(by_index.hypotheses.matrix() == d.hypotheses.matrix());
  CHECK_THROWS_AS(load_csv(f.path(), "nope"), ParseError);
  TempFile ragged("r.csv", "a,label\n1,1\n2\n");
  CHECK_THROWS_AS(load_csv(ragged.path(), "label"), ParseError);
}

TEST_CASE("bundled datasets are bounded") {
  for (const char* path : {RDL_DATA_DIR "/breast_cancer.libsvm", RDL_DATA_DIR "/synthetic_logistic.csv"}) {
    const std::string p(path);
    const Dataset d = p.ends_with(".csv") ? load_csv(p, "label") : load_libsvm(p);
    CHECK(d.measure.size() > 20);
    CHECK(d.hypotheses.matrix().cwiseAbs().maxCoeff() <= 1.0);
  }
}
