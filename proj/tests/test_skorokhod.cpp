#include <doctest.h>

#include "reference.hpp"
#include "sjfa/errors.hpp"
#include "sjfa/oracles.hpp"
#include "sjfa/rng.hpp"
#include "sjfa/skorokhod.hpp"

using namespace sjfa;

namespace {

SampledPath path_of(std::vector<double> values) {
  SampledPath p;
  for (std::size_t k = 0; k < values.size(); ++k) p.grid.push_back(static_cast<double>(k));
  p.values = std::move(values);
  return p;
}

MeasurePath uniform_alpha_prime(double horizon) {
  return MeasurePath::analytic(
      [](double t, double x) { return oracles::uniform_linear(t, x, oracles::Which::alpha_prime); }, horizon);
}

}  // namespace

TEST_CASE("reflect examples") {
  const Reflection r = reflect(path_of({0, 1, -1, 2}));
  CHECK(r.gamma2.values == std::vector<double>{0, 0, 1, 1});
  CHECK(r.gamma1.values == std::vector<double>{0, 1, 0, 3});

  const Reflection up = reflect(path_of({0, 1, 2, 3}));
  CHECK(up.gamma1.values == std::vector<double>{0, 1, 2, 3});
  CHECK(up.gamma2.values == std::vector<double>{0, 0, 0, 0});

  const Reflection down = reflect(path_of({0, -1, -2, -3}));
  CHECK(down.gamma1.values == std::vector<double>{0, 0, 0, 0});
  CHECK(down.gamma2.values == std::vector<double>{0, 1, 2, 3});

  CHECK(reflect(path_of({-2, 5})).gamma2.values[0] == 2.0);
}

TEST_CASE("reflect agrees with the quadratic oracle") {
  SplitMix64 rng(1);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> v(1 + static_cast<std::size_t>(rng.uniform() * 100));
    for (double& x : v) x = std::floor(rng.uniform() * 21.0) - 10.0;
    const Reflection r = reflect(path_of(v));
    CHECK(r.gamma2.values == ref::reflect_gamma2(v));
  }
}

TEST_CASE("mvsm on the uniform example satisfies the four conditions") {
  const Grid grid = uniform_time_grid(4.0, 0.01);
  const std::vector<double> levels = linspace(-0.5, 5.5, 61);
  const MvspSolution sol = mvsm(uniform_alpha_prime(4.0), ServiceProfile::constant(0.5), levels, grid);
  const MvspCheck c = check_mvsp(sol);
  CHECK(c.conservation < 1e-12);
  CHECK(c.budget < 1e-12);
  CHECK(c.complementarity_beta < 0.01 * 1.0);
  CHECK(c.complementarity_iota < 0.01 * 1.0);
  CHECK(c.monotone_in_level);
  CHECK(c.beta_upper_nondecreasing);
  CHECK(c.iota_nondecreasing);
  CHECK(c.nonnegative);
  for (double i : sol.iota) CHECK(i == 0.0);
  // Closed forms for t > 1.
  for (std::size_t k = 0; k < grid.size(); k += 37) {
    if (grid[k] <= 1.0) continue;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      CHECK(sol.xi(k, l) == doctest::Approx(oracles::uniform_linear(grid[k], levels[l], oracles::Which::xi_prime)));
      CHECK(sol.beta_below(k, l) ==
            doctest::Approx(oracles::uniform_linear(grid[k], levels[l], oracles::Which::beta_prime)));
    }
  }
}

TEST_CASE("mvsm with idleness") {
  // Underloaded: work at rate 1, service at rate 2, so iota grows like t.
  const Grid grid = uniform_time_grid(3.0, 0.01);
  const MvspSolution sol = mvsm(uniform_alpha_prime(3.0), ServiceProfile::constant(2.0), std::vector<double>{0.5, 1.0, 2.0}, grid);
  CHECK(sol.iota.back() == doctest::Approx(3.0));
  const MvspCheck c = check_mvsp(sol);
  CHECK(c.conservation < 1e-12);
  CHECK(c.budget < 1e-12);
  CHECK(c.iota_nondecreasing);
  CHECK(c.beta_upper_nondecreasing);
}

TEST_CASE("mvsm rejects bad input") {
  const Grid grid = uniform_time_grid(1.0, 0.1);
  CHECK_THROWS_AS(mvsm(uniform_alpha_prime(1.0), ServiceProfile::constant(1.0), std::vector<double>{1.0, 0.5}, grid), LevelOrder);
  const MeasurePath shrinking = MeasurePath::analytic([](double t, double x) { return x > 0 ? 1.0 - t / 2 : 0.0; }, 1.0);
  CHECK_THROWS_AS(mvsm(shrinking, ServiceProfile::constant(1.0), std::vector<double>{1.0}, grid), NotMonotone);
  CHECK_THROWS_AS(mvsm(uniform_alpha_prime(1.0), ServiceProfile::constant(1.0), std::vector<double>{1.0}, Grid{0.1, 0.2}), DomainError);
}

TEST_CASE("prime-plane paths interpolate the tables") {
  const Grid grid = uniform_time_grid(3.0, 0.01);
  const std::vector<double> levels = linspace(0.0, 4.0, 41);
  const MvspSolution sol = mvsm(uniform_alpha_prime(3.0), ServiceProfile::constant(0.5), levels, grid);
  const MeasurePath xi = sol.xi_prime_path();
  const MeasurePath beta = sol.beta_prime_path();
  const std::size_t k = grid.size() - 1;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    CHECK(xi.cumulative(3.0, levels[l]) == sol.xi(k, l));
    CHECK(beta.cumulative(3.0, levels[l]) == doctest::Approx(sol.beta_below(k, l)));
  }
  CHECK(xi.total(3.0) == doctest::Approx(1.5));
}
