#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sjfa/grid.hpp"
#include "sjfa/measures.hpp"
#include "sjfa/service.hpp"

namespace sjfa {

/// Real-valued path sampled on a time grid starting at 0.
struct SampledPath {
  Grid grid;
  std::vector<double> values;
};

struct Reflection {
  SampledPath gamma1;  ///< psi + gamma2 >= 0
  SampledPath gamma2;  ///< -inf_{s<=t} (psi(s) ^ 0), nondecreasing
};

/// One-dimensional Skorokhod map at zero, single pass over the running minimum.
Reflection reflect(const SampledPath& psi);

/// Output of the measure-valued Skorokhod map on a (time x level) grid.
/// Tables are row-major: index [time * level_count + level].
struct MvspSolution {
  Grid times;
  std::vector<double> levels;
  double sentinel = 0.0;  ///< level above all mass; +inf for analytic input
  std::vector<double> alpha_prime;       ///< alpha'_t[0, x']
  std::vector<double> xi_prime;          ///< xi'_t[0, x']
  std::vector<double> beta_prime_upper;  ///< beta'_t(x', inf)
  std::vector<double> iota;              ///< per time
  std::vector<double> mu;                ///< per time
  std::vector<double> alpha_total;       ///< alpha'_t[0, sentinel]
  std::vector<double> xi_total;          ///< xi'_t[0, sentinel]

  std::size_t level_count() const { return levels.size(); }
  std::size_t at(std::size_t ti, std::size_t li) const { return ti * levels.size() + li; }
  double xi(std::size_t ti, std::size_t li) const { return xi_prime[at(ti, li)]; }
  double beta_upper(std::size_t ti, std::size_t li) const { return beta_prime_upper[at(ti, li)]; }
  /// beta'_t[0, x'] = alpha' - xi'
  double beta_below(std::size_t ti, std::size_t li) const { return alpha_prime[at(ti, li)] - xi(ti, li); }

  /// xi' as a path: t snaps left onto `times`, x' interpolates linearly
  /// between levels (exact at the levels, clamped outside them).
  MeasurePath xi_prime_path() const;
  /// beta'_t[0, x'] as a path, same interpolation.
  MeasurePath beta_prime_path() const;
};

/// For each level x', (xi'[0,x'], beta'(x',inf) + iota) = Gamma(alpha'[0,x'] - mu).
/// iota is read off a sentinel level above all mass; beta'(x',inf) = Gamma_2 - iota, clamped at 0.
/// Throws NotMonotone if alpha' decreases in t at a level, LevelOrder if levels are unsorted.
MvspSolution mvsm(const MeasurePath& alpha_prime, const ServiceProfile& mu, std::span<const double> levels,
                  std::span<const double> grid);

/// Residuals of the four defining conditions plus the monotonicity properties.
struct MvspCheck {
  double conservation = 0.0;          ///< |xi' - (alpha' - mu + beta'(x,inf) + iota)|
  double budget = 0.0;                ///< |beta'[0,inf) + iota - mu|
  double complementarity_beta = 0.0;  ///< xi' where beta'(x,inf) increases
  double complementarity_iota = 0.0;  ///< xi' where iota increases
  bool monotone_in_level = true;
  bool beta_upper_nondecreasing = true;
  bool iota_nondecreasing = true;
  bool nonnegative = true;
};

MvspCheck check_mvsp(const MvspSolution& sol, double increase_tol = 1e-12);

}  // namespace sjfa
