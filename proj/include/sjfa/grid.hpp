#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sjfa {

/// Sorted sample points. Time grids additionally start at 0.
using Grid = std::vector<double>;

/// `count` evenly spaced points on [start, stop], endpoints included.
Grid linspace(double start, double stop, std::size_t count);

/// Uniform grid on [0, horizon] with step at most `step`, always ending exactly at `horizon`.
Grid uniform_time_grid(double horizon, double step);

/// Union of two sorted grids; values closer than `merge_tol` collapse to the first seen.
Grid merge_grids(std::span<const double> a, std::span<const double> b, double merge_tol = 1e-12);

/// Index of the last grid point <= t (left-nearest, cadlag snapping). Returns npos if t < grid[0].
std::size_t snap_left(std::span<const double> grid, double t);

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

bool is_sorted_strict(std::span<const double> grid);

}  // namespace sjfa
