#pragma once

#include <functional>
#include <string>
#include <vector>

namespace sjfa {

/// Job-count description of a work arrival stream: jobs arrive at
/// `intensity(s)` per unit time and carry sizes drawn by `size_quantile(s, u)`.
struct JobStream {
  std::function<double(double s)> intensity;
  double intensity_bound = 0.0;
  std::function<double(double s, double u)> size_quantile;
};

/// pi_s[0, x]: work arriving per unit time at time s with size (= initial
/// priority) at most x.
///
/// Work with size near y arrives as jobs of size y, so the job-count density
/// is pi_s(dy) / y. That density is not integrable at 0 when pi has mass
/// near the origin (uniform work), so job_stream() takes a minimum size:
/// work below it is carried by jobs of exactly that size.
class InstantaneousArrival {
 public:
  /// pi_s[0, x] = a(s) W(x / a(s)) with W piecewise linear through
  /// (xs[k], cums[k]), W(xs[0]) = 0, flat past the last point. a defaults to 1.
  static InstantaneousArrival piecewise_linear(std::vector<double> xs, std::vector<double> cums,
                                               std::function<double(double)> scale = {}, double scale_bound = 1.0);
  /// Work uniform on [0, 1] at unit rate: pi_s[0, x] = 1 ^ (x v 0).
  static InstantaneousArrival uniform();
  /// pi_s[0, x] = a(s) ^ (x v 0) with a the triangular wave 1/2 -> 1 -> 1/2 of period 2.
  static InstantaneousArrival triangular_wave();
  /// pi_s[0, x] = (1 - x^{-eta}) 1{x >= 1}, eta > 1.
  static InstantaneousArrival pareto(double eta);
  /// Fluid-only arrival given by its cumulative function.
  static InstantaneousArrival custom(std::function<double(double s, double x)> pi, double rate_bound);
  static InstantaneousArrival none();

  static double triangular_wave_height(double s);

  double cumulative(double s, double x) const { return pi_(s, x); }
  double rate(double s) const;
  double rate_bound() const { return rate_bound_; }
  bool simulable() const { return kind_ != Kind::Custom; }
  const std::string& description() const { return description_; }

  /// Throws DomainError for custom arrivals. `min_size` > 0 applies to
  /// the unscaled base profile.
  JobStream job_stream(double min_size) const;

 private:
  enum class Kind { PiecewiseLinear, Pareto, Custom, None };
  InstantaneousArrival() = default;

  Kind kind_ = Kind::None;
  std::function<double(double, double)> pi_;
  double rate_bound_ = 0.0;
  std::string description_;
  // piecewise linear
  std::vector<double> xs_;
  std::vector<double> cums_;
  std::function<double(double)> scale_;
  // pareto
  double eta_ = 0.0;
};

}  // namespace sjfa
