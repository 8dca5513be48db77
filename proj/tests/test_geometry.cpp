#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "rng.hpp"

using namespace boundopt;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("projection onto a box is the clamp, whatever the metric") {
  const FeasibleBox box1(std::vector<double>{-2.0}, std::vector<double>{2.0});
  CHECK(project_box(std::vector<double>{3.0}, box1, DiagonalMetric({5.0})) ==
        std::vector<double>{2.0});
  CHECK(project_box(std::vector<double>{0.5}, box1, DiagonalMetric({1.0})) ==
        std::vector<double>{0.5});

  const FeasibleBox box2(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 1.0});
  CHECK(project_box(std::vector<double>{-1.0, 4.0}, box2, DiagonalMetric({2.0, 7.0})) ==
        std::vector<double>({0.0, 1.0}));
}

TEST_CASE("weighted_norm") {
  CHECK(weighted_norm(DiagonalMetric({1.0, 1.0}), std::vector<double>{3.0, 4.0}) == 5.0);
  CHECK(weighted_norm(DiagonalMetric({4.0}), std::vector<double>{3.0}) == 6.0);
  CHECK(weighted_norm(DiagonalMetric({2.0, 2.0}), std::vector<double>{0.0, 0.0}) == 0.0);
}

TEST_CASE("sup-norm diameter") {
  CHECK(FeasibleBox({-2.0}, {2.0}).diameter_inf() == 4.0);
  CHECK(FeasibleBox({-1.0, 0.0}, {1.0, 10.0}).diameter_inf() == 10.0);
  CHECK(FeasibleBox({0.0}, {0.0}).diameter_inf() == 0.0);
  CHECK(FeasibleBox::unbounded(3).diameter_inf() == kInf);
  CHECK(FeasibleBox({0.0, -kInf}, {1.0, 0.0}).diameter_inf() == kInf);
}

TEST_CASE("bounded() tracks the diameter") {
  CHECK(FeasibleBox({-1.0}, {1.0}).bounded());
  CHECK_FALSE(FeasibleBox::unbounded(2).bounded());
  CHECK_FALSE(FeasibleBox({0.0}, {kInf}).bounded());
}

TEST_CASE("contains() is inclusive at the edges") {
  const FeasibleBox box({-1.0, 0.0}, {1.0, 2.0});
  CHECK(box.contains(std::vector<double>{-1.0, 2.0}));
  CHECK(box.contains(std::vector<double>{0.0, 1.0}));
  CHECK_FALSE(box.contains(std::vector<double>{1.0001, 1.0}));
  CHECK_FALSE(box.contains(std::vector<double>{0.0, -0.0001}));
}

TEST_CASE("clamp variants agree") {
  const FeasibleBox box({-1.0, 0.0}, {1.0, 2.0});
  std::vector<double> x{5.0, -3.0};
  const std::vector<double> c = box.clamped(x);
  box.clamp(x);
  CHECK(x == c);
  CHECK(c == std::vector<double>({1.0, 0.0}));
  CHECK(box.clamp1(0, -9.0) == -1.0);
  CHECK(box.clamp1(1, 0.5) == 0.5);
}

// Random boxes / metrics / points; ties the clamp implementation to the
// variational definition of the projection.
TEST_CASE("projection properties on random instances") {
  const CounterRng rng(0xB0E5);
  for (uint64_t k = 0; k < 100; ++k) {
    const size_t d = 1 + rng.word(k, 0) % 5;
    std::vector<double> lo(d), hi(d), w(d), z1(d), z2(d);
    for (size_t i = 0; i < d; ++i) {
      lo[i] = rng.uniform(k, 10 + i, -3.0, 1.0);
      hi[i] = lo[i] + rng.uniform(k, 20 + i, 0.0, 4.0);
      w[i] = rng.uniform(k, 30 + i, 0.01, 10.0);
      z1[i] = rng.uniform(k, 40 + i, -6.0, 6.0);
      z2[i] = rng.uniform(k, 50 + i, -6.0, 6.0);
    }
    const FeasibleBox box(lo, hi);
    const DiagonalMetric q(w);

    const std::vector<double> p1 = project_box(z1, box, q);
    const std::vector<double> p2 = project_box(z2, box, q);

    // Non-expansive in the metric norm.
    std::vector<double> dp(d), dz(d);
    for (size_t i = 0; i < d; ++i) {
      dp[i] = p1[i] - p2[i];
      dz[i] = z1[i] - z2[i];
    }
    CHECK(weighted_norm(q, dp) <= weighted_norm(q, dz) + 1e-12);

    // Idempotent, metric-independent, identity on interior points; all bitwise.
    CHECK(project_box(p1, box, q) == p1);
    CHECK(project_box(z1, box, DiagonalMetric::identity(d)) == p1);
    CHECK(box.contains(p1));

    std::vector<double> inside(d);
    for (size_t i = 0; i < d; ++i) inside[i] = lo[i] + 0.25 * (hi[i] - lo[i]);
    CHECK(project_box(inside, box, q) == inside);
  }
}

TEST_CASE("box construction errors") {
  CHECK_THROWS_AS(FeasibleBox({0.0, 1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleBox({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleBox({2.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleBox({std::nan("")}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleBox({0.0}, {std::nan("")}), std::invalid_argument);
  CHECK_NOTHROW(FeasibleBox({1.0}, {1.0}));  // degenerate point is fine
}

TEST_CASE("metric construction errors") {
  CHECK_THROWS_AS(DiagonalMetric({0.0}), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalMetric({-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalMetric({kInf}), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalMetric(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("dimension mismatches are rejected") {
  const FeasibleBox box({-1.0, -1.0}, {1.0, 1.0});
  CHECK_THROWS_AS(project_box(std::vector<double>{0.0}, box, DiagonalMetric::identity(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(project_box(std::vector<double>{0.0, 0.0}, box, DiagonalMetric::identity(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(weighted_norm(DiagonalMetric::identity(2), std::vector<double>{1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(box.contains(std::vector<double>{0.0}), std::invalid_argument);
}
