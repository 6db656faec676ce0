#pragma once

#include <functional>
#include <vector>

namespace sjfa {

/// Service rate m(s) >= m0 > 0 and its integral mu(t). Immutable.
class ServiceProfile {
 public:
  static ServiceProfile constant(double rate);
  /// Rate `rates[k]` on [starts[k], starts[k+1]); the last rate extends forever. starts[0] must be 0.
  static ServiceProfile piecewise(std::vector<double> starts, std::vector<double> rates);
  /// Arbitrary continuous rate; mu by adaptive quadrature, inverse by bisection.
  static ServiceProfile custom(std::function<double(double)> rate, double floor);
  /// mu = 0. Not a valid server (floor 0); used for degenerate Skorokhod-problem inputs.
  static ServiceProfile none();

  double rate(double s) const;
  double floor() const { return floor_; }
  double cumulative(double t) const;
  /// Largest rate on [0, horizon] (exact for constant/piecewise, probed otherwise).
  double max_rate(double horizon) const;
  /// Earliest theta >= start with mu(theta) - mu(start) = work.
  double completion_time(double start, double work) const;
  /// Same profile with every rate multiplied by `factor` (the N-th system serves at N m(s)).
  ServiceProfile scaled(double factor) const;

  bool is_constant() const { return kind_ == Kind::Constant; }
  bool is_piecewise() const { return kind_ == Kind::Piecewise; }
  const std::vector<double>& starts() const { return starts_; }
  const std::vector<double>& rates() const { return rates_; }

 private:
  enum class Kind { Constant, Piecewise, Custom };
  ServiceProfile() = default;

  Kind kind_ = Kind::Constant;
  double floor_ = 0.0;
  std::vector<double> starts_;
  std::vector<double> rates_;
  std::vector<double> cum_at_start_;
  std::function<double(double)> rate_fn_;
};

}  // namespace sjfa
