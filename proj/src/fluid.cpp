#include "sjfa/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>

#include "sjfa/errors.hpp"
#include "sjfa/quadrature.hpp"

namespace sjfa {

double alpha_from_pi(const InstantaneousArrival& arr, const AgingRule& rule, double t, double x) {
  if (!(t > 0.0)) return 0.0;
  if (std::isinf(x)) {
    if (x < 0) return 0.0;
    return adaptive_simpson([&arr](double s) { return arr.rate(s); }, 0.0, t).value;
  }
  if (rule.has_analytic()) {
    return adaptive_simpson([&](double s) { return arr.cumulative(s, rule.trajectory(x, t, s)); }, 0.0, t).value;
  }
  // RK4 trajectories: tabulate g along [0, t] once, interpolate between table points.
  const Grid s_grid = uniform_time_grid(t, AgingRule::kRk4Step);
  const std::vector<double> g = rule.trajectory_along(x, t, s_grid);
  return adaptive_simpson(
             [&](double s) {
               const std::size_t k = std::min(snap_left(s_grid, s), s_grid.size() - 2);
               const double w = (s - s_grid[k]) / (s_grid[k + 1] - s_grid[k]);
               return arr.cumulative(s, g[k] + w * (g[k + 1] - g[k]));
             },
             0.0, t)
      .value;
}

MeasurePath alpha_path_from_pi(const InstantaneousArrival& arr, const AgingRule& rule, double horizon) {
  return MeasurePath::analytic([arr, rule](double t, double x) { return alpha_from_pi(arr, rule, t, x); }, horizon);
}

double big_xi(const MeasurePath& alpha, const AgingRule& rule, double t, double x_prime) {
  return alpha.cumulative(t, rule.trajectory(x_prime, 0.0, t));
}

namespace {

MeasurePath interpolated_path(std::shared_ptr<const FluidSolution> sol, bool beta) {
  const double horizon = std::max(sol->times.back(), std::numeric_limits<double>::min());
  return MeasurePath::analytic(
      [sol, beta](double t, double x) {
        const FluidSolution& s = *sol;
        const std::size_t ti = snap_left(s.times, t);
        if (ti == npos) throw OutOfHorizon("t before the first output time");
        auto value = [&](std::size_t i) { return beta ? s.beta_below(ti, i) : s.xi[s.at(ti, i)]; };
        const std::size_t n = s.xs.size();
        if (std::isinf(x)) return x < 0 ? 0.0 : value(n - 1);
        if (x <= s.xs.front()) return value(0);
        if (x >= s.xs.back()) return value(n - 1);
        const auto it = std::upper_bound(s.xs.begin(), s.xs.end(), x);
        const std::size_t hi = static_cast<std::size_t>(it - s.xs.begin());
        const std::size_t lo = hi - 1;
        const double w = (x - s.xs[lo]) / (s.xs[hi] - s.xs[lo]);
        return value(lo) + w * (value(hi) - value(lo));
      },
      horizon);
}

struct Prepared {
  Grid integration;
  std::vector<std::size_t> output_index;
};

Prepared prepare(std::span<const double> tgrid, std::span<const double> xgrid, FluidOptions opts) {
  if (tgrid.empty() || xgrid.empty()) throw DomainError("fluid grids must be nonempty");
  if (tgrid.front() < 0.0 || !is_sorted_strict(tgrid)) throw DomainError("t grid must be sorted and nonnegative");
  if (!is_sorted_strict(xgrid)) throw DomainError("x grid must be strictly increasing");
  const double horizon = tgrid.back();
  Prepared p;
  if (horizon > 0.0) {
    const double step = opts.step > 0.0 ? opts.step : 1e-3 * horizon;
    p.integration = merge_grids(uniform_time_grid(horizon, step), tgrid);
  } else {
    p.integration = {0.0};
  }
  for (double t : tgrid) p.output_index.push_back(snap_left(p.integration, t));
  return p;
}

FluidSolution empty_solution(std::span<const double> tgrid, std::span<const double> xgrid, const ServiceProfile& mu) {
  FluidSolution sol;
  sol.times.assign(tgrid.begin(), tgrid.end());
  sol.xs.assign(xgrid.begin(), xgrid.end());
  const std::size_t n = tgrid.size() * xgrid.size();
  sol.x_prime.resize(n);
  sol.alpha.resize(n);
  sol.xi.resize(n);
  sol.beta_upper.resize(n);
  sol.iota.resize(tgrid.size());
  sol.mu.resize(tgrid.size());
  for (std::size_t k = 0; k < tgrid.size(); ++k) sol.mu[k] = mu.cumulative(tgrid[k]);
  return sol;
}

}  // namespace

MeasurePath FluidSolution::xi_path() const {
  return interpolated_path(std::make_shared<const FluidSolution>(*this), false);
}

MeasurePath FluidSolution::beta_path() const {
  return interpolated_path(std::make_shared<const FluidSolution>(*this), true);
}

void FluidSolution::write_csv(std::ostream& out) const {
  out << "t,x,xi,beta_upper,iota\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out << format_real(times[k]) << ',' << format_real(xs[i]) << ',' << format_real(xi[at(k, i)]) << ','
          << format_real(beta_upper[at(k, i)]) << ',' << format_real(iota[k]) << '\n';
    }
  }
}

FluidSolution FluidSolution::read_csv(std::istream& in, const ServiceProfile& service) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x,xi,beta_upper,iota", 0) != 0)
    throw DomainError("fluid CSV must start with the header t,x,xi,beta_upper,iota");
  struct Row {
    double t, x, xi, bu, iota;
  };
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    Row r{};
    if (!(ss >> r.t >> r.x >> r.xi >> r.bu >> r.iota))
      throw DomainError("fluid CSV line " + std::to_string(line_no) + " is malformed");
    rows.push_back(r);
  }
  FluidSolution sol;
  for (const Row& r : rows) {
    if (sol.times.empty() || r.t != sol.times.back()) sol.times.push_back(r.t);
    if (sol.times.size() == 1) sol.xs.push_back(r.x);
  }
  if (sol.times.empty() || rows.size() != sol.times.size() * sol.xs.size())
    throw DomainError("fluid CSV is not a full t-by-x grid");
  for (std::size_t k = 0; k < sol.times.size(); ++k) {
    sol.iota.push_back(rows[k * sol.xs.size()].iota);
    sol.mu.push_back(service.cumulative(sol.times[k]));
  }
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const Row& r = rows[n];
    const std::size_t k = n / sol.xs.size();
    if (r.x != sol.xs[n % sol.xs.size()]) throw DomainError("fluid CSV x columns differ between time rows");
    sol.xi.push_back(r.xi);
    sol.beta_upper.push_back(r.bu);
    sol.alpha.push_back(r.xi + sol.mu[k] - sol.iota[k] - r.bu);
    sol.x_prime.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  return sol;
}

FluidSolution solve_fluid(const MeasurePath& alpha, const ServiceProfile& mu, const AgingRule& rule,
                          std::span<const double> tgrid, std::span<const double> xgrid, FluidOptions opts) {
  const Prepared prep = prepare(tgrid, xgrid, opts);
  FluidSolution sol = empty_solution(tgrid, xgrid, mu);
  const MeasurePath alpha_prime = transport_F(alpha, rule, Direction::Forward);
  const std::size_t nx = xgrid.size();

  std::vector<double> levels(nx);
  for (std::size_t k = 0; k < tgrid.size(); ++k) {
    const double t = tgrid[k];
    for (std::size_t i = 0; i < nx; ++i) levels[i] = to_prime(rule, {xgrid[i], t}).x;
    const std::span<const double> prefix(prep.integration.data(), prep.output_index[k] + 1);
    const MvspSolution prime = mvsm(alpha_prime, mu, levels, prefix);
    const std::size_t last = prefix.size() - 1;
    const MeasurePath xi_back = transport_F(prime.xi_prime_path(), rule, Direction::Inverse);
    sol.iota[k] = prime.iota[last];
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t n = sol.at(k, i);
      sol.x_prime[n] = levels[i];
      sol.alpha[n] = prime.alpha_prime[prime.at(last, i)];
      sol.beta_upper[n] = prime.beta_upper(last, i);
      // Left of all mass on the prime plane.
      sol.xi[n] = levels[i] < 0.0 ? 0.0 : xi_back.cumulative(t, xgrid[i]);
    }
  }
  return sol;
}

FluidSolution solve_fluid_direct(const MeasurePath& alpha, const ServiceProfile& mu, const AgingRule& rule,
                                 std::span<const double> tgrid, std::span<const double> xgrid,
                                 FluidOptions opts) {
  const Prepared prep = prepare(tgrid, xgrid, opts);
  FluidSolution sol = empty_solution(tgrid, xgrid, mu);
  const Grid& s_grid = prep.integration;

  std::vector<double> mu_s(s_grid.size());
  std::vector<double> total_s(s_grid.size());
  for (std::size_t j = 0; j < s_grid.size(); ++j) {
    mu_s[j] = mu.cumulative(s_grid[j]);
    total_s[j] = alpha.total(s_grid[j]);
  }

  for (std::size_t k = 0; k < tgrid.size(); ++k) {
    const std::size_t last = prep.output_index[k];
    double iota_min = 0.0;
    for (std::size_t j = 0; j <= last; ++j) iota_min = std::min(iota_min, total_s[j] - mu_s[j]);
    sol.iota[k] = -iota_min;

    for (std::size_t i = 0; i < xgrid.size(); ++i) {
      const std::size_t n = sol.at(k, i);
      const double xp = to_prime(rule, {xgrid[i], tgrid[k]}).x;
      sol.x_prime[n] = xp;
      const std::span<const double> prefix(s_grid.data(), last + 1);
      const std::vector<double> g = rule.trajectory_along(xp, 0.0, prefix);
      SampledPath psi{Grid(prefix.begin(), prefix.end()), std::vector<double>(last + 1)};
      for (std::size_t j = 0; j <= last; ++j) psi.values[j] = alpha.cumulative(s_grid[j], g[j]) - mu_s[j];
      const Reflection r = reflect(psi);
      sol.alpha[n] = psi.values[last] + mu_s[last];
      sol.xi[n] = xp < 0.0 ? 0.0 : r.gamma1.values[last];
      sol.beta_upper[n] = std::max(0.0, r.gamma2.values[last] - sol.iota[k]);
    }
  }
  return sol;
}

GuessResult guess_solution(const MeasurePath& alpha_prime, const ServiceProfile& mu, std::span<const double> levels,
                           std::span<const double> tgrid) {
  if (!std::is_sorted(levels.begin(), levels.end())) throw LevelOrder("levels must be sorted ascending");
  GuessResult out;
  MvspSolution& sol = out.solution;
  sol.times.assign(tgrid.begin(), tgrid.end());
  sol.levels.assign(levels.begin(), levels.end());
  sol.sentinel = MeasurePath::kInf;
  const std::size_t nt = tgrid.size();
  const std::size_t nl = levels.size();
  sol.alpha_prime.resize(nt * nl);
  sol.xi_prime.resize(nt * nl);
  sol.beta_prime_upper.resize(nt * nl);
  sol.iota.assign(nt, 0.0);
  sol.mu.resize(nt);
  sol.alpha_total.resize(nt);
  sol.xi_total.resize(nt);

  out.valid = true;
  constexpr double kTol = 1e-12;
  std::vector<double> prev_upper(nl, 0.0);
  for (std::size_t k = 0; k < nt; ++k) {
    const double m = mu.cumulative(tgrid[k]);
    sol.mu[k] = m;
    sol.alpha_total[k] = alpha_prime.total(tgrid[k]);
    sol.xi_total[k] = std::max(0.0, sol.alpha_total[k] - m);
    if (sol.alpha_total[k] < m - kTol) out.valid = false;
    for (std::size_t l = 0; l < nl; ++l) {
      const std::size_t n = sol.at(k, l);
      const double a = alpha_prime.cumulative(tgrid[k], levels[l]);
      sol.alpha_prime[n] = a;
      sol.xi_prime[n] = std::max(0.0, a - m);
      sol.beta_prime_upper[n] = std::max(0.0, m - a);
      if (k > 0 && sol.beta_prime_upper[n] < prev_upper[l] - kTol) out.valid = false;
      prev_upper[l] = sol.beta_prime_upper[n];
    }
  }
  return out;
}

double x_star(const MeasurePath& alpha_prime, const ServiceProfile& mu, double t, double resolution) {
  const double target = mu.cumulative(t);
  const auto reached = [&](double x) {
    const double a = alpha_prime.cumulative(t, x);
    return target > 0.0 ? a >= target : a > 0.0;
  };
  if (!reached(MeasurePath::kInf)) return MeasurePath::kInf;
  double lo = 0.0;
  if (reached(lo)) {
    // Mass at or below 0 on the prime plane; search leftwards.
    double step = 1.0;
    while (reached(lo - step) && step < 1e300) step *= 2.0;
    if (step >= 1e300) return -MeasurePath::kInf;
    double hi = lo;
    lo = lo - step;
    while (hi - lo > resolution) {
      const double mid = 0.5 * (lo + hi);
      (reached(mid) ? hi : lo) = mid;
    }
    return hi;
  }
  double hi = 1.0;
  while (!reached(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (reached(mid) ? hi : lo) = mid;
  }
  return hi;
}

void validate_fluid_data(const MeasurePath& alpha, std::span<const double> t_probe, std::span<const double> x_probe,
                         double atom_tol) {
  constexpr int kRefinements = 4;
  constexpr int kSplit = 4;
  for (double t : t_probe) {
    for (std::size_t i = 1; i < x_probe.size(); ++i) {
      double lo = x_probe[i - 1];
      double hi = x_probe[i];
      const double initial = alpha.cumulative(t, hi) - alpha.cumulative(t, lo);
      if (initial <= atom_tol) continue;
      double jump = initial;
      for (int r = 0; r < kRefinements; ++r) {
        const double w = (hi - lo) / kSplit;
        double best = -1.0;
        double best_lo = lo;
        for (int c = 0; c < kSplit; ++c) {
          const double a = lo + w * c;
          const double b = c == kSplit - 1 ? hi : a + w;
          const double d = alpha.cumulative(t, b) - alpha.cumulative(t, a);
          if (d > best) {
            best = d;
            best_lo = a;
          }
        }
        lo = best_lo;
        hi = best_lo + w;
        jump = best;
      }
      if (jump > atom_tol && jump >= 0.5 * initial) {
        throw DomainError("arrival data has an atom of mass ~" + format_real(jump) + " near x=" + format_real(lo) +
                          " at t=" + format_real(t) + "; fluid data must be atomless");
      }
    }
  }
}

FluidCheck check_fluid(const FluidSolution& sol) {
  FluidCheck c;
  for (std::size_t k = 0; k < sol.times.size(); ++k) {
    if (sol.iota[k] < -1e-12) c.nonnegative = false;
    if (k > 0 && sol.iota[k] < sol.iota[k - 1] - 1e-12) c.iota_nondecreasing = false;
    for (std::size_t i = 0; i < sol.xs.size(); ++i) {
      const std::size_t n = sol.at(k, i);
      if (sol.xi[n] < -1e-12 || sol.beta_upper[n] < -1e-12 || sol.beta_below(k, i) < -1e-9) c.nonnegative = false;
      if (i > 0) {
        const std::size_t p = sol.at(k, i - 1);
        if (sol.xi[n] < sol.xi[p] - 1e-12 || sol.beta_below(k, i) < sol.beta_below(k, i - 1) - 1e-12)
          c.monotone_in_x = false;
      }
      if (!(sol.x_prime[n] < 0.0)) {
        const double resid = sol.xi[n] - (sol.alpha[n] - sol.mu[k] + sol.beta_upper[n] + sol.iota[k]);
        c.consistency = std::max(c.consistency, std::abs(resid));
      }
    }
  }
  return c;
}

}  // namespace sjfa
