#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "sjfa/aging.hpp"
#include "sjfa/arrival.hpp"
#include "sjfa/grid.hpp"
#include "sjfa/measures.hpp"
#include "sjfa/service.hpp"
#include "sjfa/skorokhod.hpp"

namespace sjfa {

/// alpha_t(-inf, x] = int_0^t pi_s[0, g_{(x,t)}(s)] ds by adaptive Simpson.
double alpha_from_pi(const InstantaneousArrival& arr, const AgingRule& rule, double t, double x);

/// alpha as a lazily evaluated path backed by alpha_from_pi.
MeasurePath alpha_path_from_pi(const InstantaneousArrival& arr, const AgingRule& rule, double horizon);

/// Xi(t, x') = alpha_t(-inf, g_{(x',0)}(t)].
double big_xi(const MeasurePath& alpha, const AgingRule& rule, double t, double x_prime);

/// Fluid limit (xi, beta, iota) on an output grid. Tables are row-major [t][x].
struct FluidSolution {
  Grid times;
  Grid xs;
  std::vector<double> x_prime;     ///< g_{(x,t)}(0) per node
  std::vector<double> alpha;       ///< alpha_t(-inf, x]
  std::vector<double> xi;          ///< xi_t(-inf, x]
  std::vector<double> beta_upper;  ///< beta_t(x, inf)
  std::vector<double> iota;        ///< per time
  std::vector<double> mu;          ///< per time

  std::size_t at(std::size_t ti, std::size_t xi_index) const { return ti * xs.size() + xi_index; }
  /// beta_t(-inf, x] = mu - iota - beta_t(x, inf)
  double beta_below(std::size_t ti, std::size_t xi_index) const {
    return mu[ti] - iota[ti] - beta_upper[at(ti, xi_index)];
  }

  /// Paths over the output grid: t snaps left, x interpolates linearly and is
  /// clamped to the end values outside [xs.front(), xs.back()].
  MeasurePath xi_path() const;
  MeasurePath beta_path() const;

  /// Columns t,x,xi,beta_upper,iota with a header line.
  void write_csv(std::ostream& out) const;
  /// Inverse of write_csv; mu is re-derived from `service`.
  static FluidSolution read_csv(std::istream& in, const ServiceProfile& service);
};

struct FluidOptions {
  /// Step of the grid carrying the running infimum; 0 means 1e-3 * horizon.
  double step = 0.0;
};

/// Prime-plane route: alpha' = F(alpha), mvsm level by level, then F^{-1}.
/// `tgrid` must be sorted with tgrid[0] >= 0; `xgrid` sorted.
FluidSolution solve_fluid(const MeasurePath& alpha, const ServiceProfile& mu, const AgingRule& rule,
                          std::span<const double> tgrid, std::span<const double> xgrid, FluidOptions opts = {});

/// Original-plane route: reflect psi(s) = Xi(s, g_{(x,t)}(0)) - mu(s) node by node.
FluidSolution solve_fluid_direct(const MeasurePath& alpha, const ServiceProfile& mu, const AgingRule& rule,
                                 std::span<const double> tgrid, std::span<const double> xgrid,
                                 FluidOptions opts = {});

struct GuessResult {
  MvspSolution solution;
  bool valid = false;
};

/// beta'[0,x'] = alpha' ^ mu, xi' = (alpha' - mu)^+, iota = 0. Valid iff
/// t -> (mu - alpha'_t[0,x'])^+ is nondecreasing at every level and the
/// system is overloaded (alpha'_t total >= mu(t)).
GuessResult guess_solution(const MeasurePath& alpha_prime, const ServiceProfile& mu, std::span<const double> levels,
                           std::span<const double> tgrid);

/// inf{x' : alpha'_t[0, x'] >= mu(t)}; +inf when not enough work has arrived.
/// With mu(t) = 0 this is the infimum of the support.
double x_star(const MeasurePath& alpha_prime, const ServiceProfile& mu, double t, double resolution = 1e-9);

/// Throws DomainError when a slice has an atom heavier than `atom_tol`: an
/// increment that survives four successive 4x refinements of an x cell.
void validate_fluid_data(const MeasurePath& alpha, std::span<const double> t_probe, std::span<const double> x_probe,
                         double atom_tol = 1e-6);

struct FluidCheck {
  double consistency = 0.0;  ///< |xi - (Xi - mu + beta(x,inf) + iota)|
  bool nonnegative = true;
  bool monotone_in_x = true;
  bool iota_nondecreasing = true;
};

FluidCheck check_fluid(const FluidSolution& sol);

}  // namespace sjfa
