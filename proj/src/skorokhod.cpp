#include "sjfa/skorokhod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "sjfa/errors.hpp"

namespace sjfa {

Reflection reflect(const SampledPath& psi) {
  if (psi.grid.size() != psi.values.size()) throw DomainError("path grid and values differ in length");
  const std::size_t n = psi.values.size();
  Reflection r{{psi.grid, std::vector<double>(n)}, {psi.grid, std::vector<double>(n)}};
  double run_min = 0.0;  // running inf of psi ^ 0
  for (std::size_t i = 0; i < n; ++i) {
    run_min = std::min(run_min, psi.values[i]);
    r.gamma2.values[i] = -run_min;
    r.gamma1.values[i] = psi.values[i] - run_min;
  }
  return r;
}

namespace {

double sentinel_for(const MeasurePath& path) {
  if (!path.is_sampled()) return MeasurePath::kInf;
  double top = 0.0;
  for (const AtomicMeasure& m : path.measures()) {
    if (!m.empty()) top = std::max(top, m.locations().back());
  }
  return top + 1.0;
}

template <typename Row>
double interp_levels(std::span<const double> levels, Row row, double top_value, double x) {
  if (std::isinf(x) && x > 0) return top_value;
  if (levels.empty()) return 0.0;
  if (x <= levels.front()) return row(0);
  if (x >= levels.back()) return row(levels.size() - 1);
  const auto it = std::upper_bound(levels.begin(), levels.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - levels.begin());
  const std::size_t lo = hi - 1;
  if (x == levels[lo]) return row(lo);
  const double w = (x - levels[lo]) / (levels[hi] - levels[lo]);
  return row(lo) + w * (row(hi) - row(lo));
}

MeasurePath table_path(const MvspSolution& sol, bool beta) {
  auto shared = std::make_shared<const MvspSolution>(sol);
  const double horizon = std::max(sol.times.back(), std::numeric_limits<double>::min());
  return MeasurePath::analytic(
      [shared, beta](double t, double x) {
        const MvspSolution& s = *shared;
        const std::size_t ti = snap_left(s.times, t);
        auto row = [&s, ti, beta](std::size_t i) { return beta ? s.beta_below(ti, i) : s.xi(ti, i); };
        const double top = beta ? s.alpha_total[ti] - s.xi_total[ti] : s.xi_total[ti];
        return interp_levels(s.levels, row, top, x);
      },
      horizon);
}

}  // namespace

MeasurePath MvspSolution::xi_prime_path() const { return table_path(*this, false); }
MeasurePath MvspSolution::beta_prime_path() const { return table_path(*this, true); }

MvspSolution mvsm(const MeasurePath& alpha_prime, const ServiceProfile& mu, std::span<const double> levels,
                  std::span<const double> grid) {
  if (grid.empty() || grid.front() != 0.0 || !is_sorted_strict(grid))
    throw DomainError("mvsm grid must start at 0 and increase");
  if (!std::is_sorted(levels.begin(), levels.end())) throw LevelOrder("levels must be sorted ascending");

  MvspSolution sol;
  sol.times.assign(grid.begin(), grid.end());
  sol.levels.assign(levels.begin(), levels.end());
  sol.sentinel = sentinel_for(alpha_prime);
  if (!levels.empty() && sol.sentinel < levels.back()) sol.sentinel = levels.back() + 1.0;

  const std::size_t nt = grid.size();
  const std::size_t nl = levels.size();
  sol.alpha_prime.resize(nt * nl);
  sol.xi_prime.resize(nt * nl);
  sol.beta_prime_upper.resize(nt * nl);
  sol.iota.resize(nt);
  sol.mu.resize(nt);
  sol.alpha_total.resize(nt);
  sol.xi_total.resize(nt);

  for (std::size_t k = 0; k < nt; ++k) {
    sol.mu[k] = mu.cumulative(grid[k]);
    sol.alpha_total[k] = alpha_prime.cumulative(grid[k], sol.sentinel);
    for (std::size_t l = 0; l < nl; ++l) sol.alpha_prime[sol.at(k, l)] = alpha_prime.cumulative(grid[k], levels[l]);
  }

  auto monotone_tol = [](double v) { return 1e-10 * std::max(1.0, std::abs(v)); };
  for (std::size_t k = 1; k < nt; ++k) {
    if (sol.alpha_total[k] < sol.alpha_total[k - 1] - monotone_tol(sol.alpha_total[k - 1]))
      throw NotMonotone("alpha' total decreases at t=" + format_real(grid[k]));
    for (std::size_t l = 0; l < nl; ++l) {
      const double prev = sol.alpha_prime[sol.at(k - 1, l)];
      if (sol.alpha_prime[sol.at(k, l)] < prev - monotone_tol(prev))
        throw NotMonotone("alpha'[0," + format_real(levels[l]) + "] decreases at t=" + format_real(grid[k]));
    }
  }

  // Sentinel first: iota is needed to split Gamma_2 at every other level.
  double run_min = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    const double psi = sol.alpha_total[k] - sol.mu[k];
    run_min = std::min(run_min, psi);
    sol.iota[k] = -run_min;
    sol.xi_total[k] = psi - run_min;
  }
  for (std::size_t l = 0; l < nl; ++l) {
    double m = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
      const double psi = sol.alpha_prime[sol.at(k, l)] - sol.mu[k];
      m = std::min(m, psi);
      sol.xi_prime[sol.at(k, l)] = psi - m;
      sol.beta_prime_upper[sol.at(k, l)] = std::max(0.0, -m - sol.iota[k]);
    }
  }
  return sol;
}

MvspCheck check_mvsp(const MvspSolution& sol, double increase_tol) {
  MvspCheck c;
  const std::size_t nt = sol.times.size();
  const std::size_t nl = sol.levels.size();
  for (std::size_t k = 0; k < nt; ++k) {
    const double beta_all = sol.alpha_total[k] - sol.xi_total[k];
    c.budget = std::max(c.budget, std::abs(beta_all + sol.iota[k] - sol.mu[k]));
    if (sol.iota[k] < 0.0 || sol.xi_total[k] < 0.0) c.nonnegative = false;
    const bool iota_up = k > 0 && sol.iota[k] - sol.iota[k - 1] > increase_tol;
    if (k > 0 && sol.iota[k] < sol.iota[k - 1] - 1e-12) c.iota_nondecreasing = false;
    if (iota_up) c.complementarity_iota = std::max(c.complementarity_iota, sol.xi_total[k]);
    for (std::size_t l = 0; l < nl; ++l) {
      const double xi = sol.xi(k, l);
      const double bu = sol.beta_upper(k, l);
      const double resid = xi - (sol.alpha_prime[sol.at(k, l)] - sol.mu[k] + bu + sol.iota[k]);
      c.conservation = std::max(c.conservation, std::abs(resid));
      if (xi < 0.0 || bu < 0.0) c.nonnegative = false;
      if (l > 0 && (xi < sol.xi(k, l - 1) - 1e-12 || sol.beta_below(k, l) < sol.beta_below(k, l - 1) - 1e-12))
        c.monotone_in_level = false;
      if (k > 0) {
        const double prev = sol.beta_upper(k - 1, l);
        if (bu < prev - 1e-12) c.beta_upper_nondecreasing = false;
        if (bu - prev > increase_tol) c.complementarity_beta = std::max(c.complementarity_beta, xi);
        if (iota_up) c.complementarity_iota = std::max(c.complementarity_iota, xi);
      }
    }
  }
  return c;
}

}  // namespace sjfa
