#pragma once

#include <cmath>
#include <functional>

#include "sjfa/errors.hpp"

namespace sjfa {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int max_depth_reached = 0;
};

/// Adaptive composite Simpson on [a, b]. Panels are halved until the local
/// Richardson estimate meets its share of `rel_tol * |I|` (with `abs_floor`
/// as the absolute floor), down to 2^max_depth panels. Panels that still miss
/// at the depth limit are accepted, but their estimated error is accumulated
/// and a QuadratureFailure is raised if the total exceeds the tolerance.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol = 1e-8, int max_depth = 40, double abs_floor = 1e-13);

inline double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-8) {
  return adaptive_simpson(f, a, b, rel_tol).value;
}

}  // namespace sjfa
