#include "sjfa/grid.hpp"

#include <algorithm>
#include <cmath>

#include "sjfa/errors.hpp"

namespace sjfa {

Grid linspace(double start, double stop, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {start};
  Grid g(count);
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g[i] = start + step * static_cast<double>(i);
  g.back() = stop;
  return g;
}

Grid uniform_time_grid(double horizon, double step) {
  if (!(horizon > 0.0) || !(step > 0.0)) throw DomainError("time grid needs horizon > 0 and step > 0");
  const auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  return linspace(0.0, horizon, std::max<std::size_t>(n, 1) + 1);
}

Grid merge_grids(std::span<const double> a, std::span<const double> b, double merge_tol) {
  Grid out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  Grid dedup;
  dedup.reserve(out.size());
  for (double v : out) {
    if (dedup.empty() || v - dedup.back() > merge_tol * std::max(1.0, std::abs(v))) dedup.push_back(v);
  }
  return dedup;
}

std::size_t snap_left(std::span<const double> grid, double t) {
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  auto it = std::upper_bound(grid.begin(), grid.end(), t + slack);
  if (it == grid.begin()) return npos;
  return static_cast<std::size_t>(it - grid.begin()) - 1;
}

bool is_sorted_strict(std::span<const double> grid) {
  return std::adjacent_find(grid.begin(), grid.end(), [](double a, double b) { return !(a < b); }) ==
         grid.end();
}

}  // namespace sjfa
