#include <doctest.h>

#include <cmath>
#include <random>

#include "sjfa/aging.hpp"
#include "sjfa/errors.hpp"
#include "sjfa/rng.hpp"

using namespace sjfa;

namespace {

AgingRule numeric_exponential(double lambda) {
  return AgingRule::custom([lambda](double g, double) { return -lambda * g; }, lambda);
}

// f(g, s) = -(1 + 0.5 sin g) - 0.1 s: Lipschitz 0.5 in g, no closed form.
AgingRule wobbly() {
  return AgingRule::custom([](double g, double s) { return -(1.0 + 0.5 * std::sin(g)) - 0.1 * s; }, 0.5);
}

}  // namespace

TEST_CASE("trajectory closed forms") {
  CHECK(trajectory(AgingRule::linear(1.0), 2.0, 1.0, 3.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(trajectory(AgingRule::exponential(0.1), 1.0, 0.0, 10.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  for (const AgingRule& r : {AgingRule::linear(0.7), AgingRule::exponential(0.3), wobbly()}) {
    CHECK(trajectory(r, 1.25, 2.0, 2.0) == 1.25);
  }
}

TEST_CASE("to_prime and from_prime") {
  const AgingRule lin = AgingRule::linear(1.0);
  const PlanePoint p = to_prime(lin, {0.5, 2.0});
  CHECK(p.x == doctest::Approx(2.5));
  CHECK(p.t == 2.0);
  const PlanePoint q = from_prime(lin, {2.5, 2.0});
  CHECK(q.x == doctest::Approx(0.5));

  const AgingRule ex = AgingRule::exponential(0.1);
  CHECK(to_prime(ex, {1.0, 10.0}).x == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  // Backward RK4 on the same ODE, no closed form available to the integrator.
  CHECK(std::abs(to_prime(numeric_exponential(0.1), {1.0, 10.0}).x - std::exp(1.0)) < 1e-10);
  CHECK(from_prime(ex, {1.0, 0.0}).x == 1.0);

  for (const AgingRule& r : {lin, ex, wobbly()}) {
    const PlanePoint z = to_prime(r, {0.3, 0.0});
    CHECK(z.x == 0.3);
    CHECK(z.t == 0.0);
  }
}

TEST_CASE("custom rule round trip within 1e-8") {
  const AgingRule r = wobbly();
  SplitMix64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const double x = -3.0 + 6.0 * rng.uniform();
    const double t = 5.0 * rng.uniform();
    const PlanePoint back = from_prime(r, to_prime(r, {x, t}));
    CHECK(std::abs(back.x - x) < 1e-8);
  }
}

TEST_CASE("separation bound") {
  CHECK(separation_bound(AgingRule::linear(1.0), 0.0, 3.0, 1.0, 4.0));
  CHECK(separation_bound(AgingRule::exponential(0.2), 1.0, 5.0, 0.0, 7.0));
  CHECK(separation_bound(AgingRule::exponential(0.2), 1.0, 5.0, 7.0, 0.0));
  const AgingRule r = wobbly();
  SplitMix64 rng(11);
  int ok = 0;
  for (int k = 0; k < 1000; ++k) {
    const double x1 = -4.0 + 8.0 * rng.uniform();
    const double x2 = -4.0 + 8.0 * rng.uniform();
    const double t = 3.0 * rng.uniform();
    const double s = 3.0 * rng.uniform();
    ok += separation_bound(r, x1, x2, t, s) ? 1 : 0;
  }
  CHECK(ok == 1000);
}

TEST_CASE("trajectory through the anchor agrees with the direct one") {
  const std::vector<double> grid{0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
  struct Case {
    AgingRule rule;
    double tol;
  };
  for (const Case& c : {Case{AgingRule::linear(1.0), 1e-8}, Case{AgingRule::exponential(0.4), 1e-8},
                        Case{wobbly(), 1e-6}}) {
    for (double x : {-1.0, 0.3, 2.0}) {
      const double t = 1.0;
      const double anchor = to_prime(c.rule, {x, t}).x;
      for (double s : grid) {
        const double direct = c.rule.trajectory(x, t, s);
        const double via = from_prime(c.rule, {anchor, s}).x;
        CHECK(std::abs(direct - via) < c.tol);
      }
      const std::vector<double> along = c.rule.trajectory_along(x, t, grid);
      for (std::size_t k = 0; k < grid.size(); ++k) CHECK(std::abs(along[k] - c.rule.trajectory(x, t, grid[k])) < c.tol);
    }
  }
}

TEST_CASE("trajectories keep their order and decrease") {
  for (const AgingRule& r : {AgingRule::linear(0.5), AgingRule::exponential(0.3), wobbly()}) {
    for (double s = 0.0; s <= 4.0; s += 0.5) {
      CHECK(r.trajectory(0.4, 1.0, s) < r.trajectory(0.41, 1.0, s));
      CHECK(r.trajectory(-2.0, 3.0, s) < r.trajectory(1.0, 3.0, s));
    }
  }
  // Strict decrease for f < 0.
  for (const AgingRule& r : {AgingRule::linear(0.5), wobbly()}) {
    double prev = r.trajectory(1.0, 0.0, 0.0);
    for (double s = 0.25; s <= 4.0; s += 0.25) {
      const double g = r.trajectory(1.0, 0.0, s);
      CHECK(g < prev);
      prev = g;
    }
  }
  // Positive priorities map to positive prime priorities.
  for (const AgingRule& r : {AgingRule::linear(2.0), AgingRule::exponential(0.5)})
    for (double x : {0.0, 0.1, 3.0})
      for (double t : {0.0, 1.0, 5.0}) CHECK(to_prime(r, {x, t}).x >= 0.0);
}

TEST_CASE("rule validation and failures") {
  CHECK_THROWS_AS(AgingRule::custom([](double g, double) { return -3.0 * g; }, 1.0), InvalidRule);
  CHECK_THROWS_AS(AgingRule::linear(-1.0), InvalidRule);
  CHECK_THROWS_AS(AgingRule::exponential(0.0), InvalidRule);
  const AgingRule fast = AgingRule::custom([](double g, double) { return 1e6 * g; }, 1e6, {-1.0, 1.0, 0.0, 1.0});
  CHECK_THROWS_AS(fast.trajectory(1.0, 0.0, 1.0), NonFiniteTrajectory);
  CHECK(AgingRule::linear(1.0).tolerance(10.0) == 0.0);
  CHECK(wobbly().tolerance(3.0) > 0.0);
  CHECK(wobbly().tolerance(3.0) < 1e-6);
}
