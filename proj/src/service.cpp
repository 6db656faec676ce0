#include "sjfa/service.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sjfa/errors.hpp"
#include "sjfa/quadrature.hpp"

namespace sjfa {

ServiceProfile ServiceProfile::constant(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("service rate must be positive, got " + std::to_string(rate));
  ServiceProfile p;
  p.kind_ = Kind::Constant;
  p.floor_ = rate;
  p.rates_ = {rate};
  p.starts_ = {0.0};
  p.cum_at_start_ = {0.0};
  return p;
}

ServiceProfile ServiceProfile::piecewise(std::vector<double> starts, std::vector<double> rates) {
  if (starts.empty() || starts.size() != rates.size()) throw DomainError("piecewise service needs matching starts/rates");
  if (starts.front() != 0.0) throw DomainError("piecewise service must start at t=0");
  for (std::size_t k = 1; k < starts.size(); ++k) {
    if (!(starts[k] > starts[k - 1])) throw DomainError("piecewise service starts must increase");
  }
  for (double r : rates) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("service rates must be positive");
  }
  ServiceProfile p;
  p.kind_ = Kind::Piecewise;
  p.floor_ = *std::min_element(rates.begin(), rates.end());
  p.cum_at_start_.resize(starts.size());
  p.cum_at_start_[0] = 0.0;
  for (std::size_t k = 1; k < starts.size(); ++k)
    p.cum_at_start_[k] = p.cum_at_start_[k - 1] + rates[k - 1] * (starts[k] - starts[k - 1]);
  p.starts_ = std::move(starts);
  p.rates_ = std::move(rates);
  return p;
}

ServiceProfile ServiceProfile::custom(std::function<double(double)> rate, double floor) {
  if (!rate) throw DomainError("custom service without a rate function");
  if (!(floor > 0.0)) throw DomainError("service floor m0 must be positive");
  ServiceProfile p;
  p.kind_ = Kind::Custom;
  p.floor_ = floor;
  p.rate_fn_ = std::move(rate);
  return p;
}

ServiceProfile ServiceProfile::none() {
  ServiceProfile p;
  p.kind_ = Kind::Piecewise;
  p.floor_ = 0.0;
  p.starts_ = {0.0};
  p.rates_ = {0.0};
  p.cum_at_start_ = {0.0};
  return p;
}

double ServiceProfile::rate(double s) const {
  if (kind_ == Kind::Custom) return rate_fn_(s);
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), s);
  const std::size_t k = it == starts_.begin() ? 0 : static_cast<std::size_t>(it - starts_.begin()) - 1;
  return rates_[k];
}

double ServiceProfile::cumulative(double t) const {
  if (t <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Constant:
      return rates_[0] * t;
    case Kind::Piecewise: {
      const auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
      const std::size_t k = static_cast<std::size_t>(it - starts_.begin()) - 1;
      return cum_at_start_[k] + rates_[k] * (t - starts_[k]);
    }
    case Kind::Custom:
      return adaptive_simpson(rate_fn_, 0.0, t, 1e-12, 20, 1e-15).value;
  }
  return 0.0;
}

double ServiceProfile::max_rate(double horizon) const {
  if (kind_ != Kind::Custom) {
    double m = 0.0;
    for (std::size_t k = 0; k < starts_.size() && starts_[k] <= horizon; ++k) m = std::max(m, rates_[k]);
    return m;
  }
  double m = floor_;
  constexpr int kProbes = 4096;
  for (int i = 0; i <= kProbes; ++i) m = std::max(m, rate_fn_(horizon * i / kProbes));
  return m;
}

double ServiceProfile::completion_time(double start, double work) const {
  if (!(work >= 0.0)) throw DomainError("negative work");
  if (work == 0.0) return start;
  if (kind_ == Kind::Constant) return start + work / rates_[0];
  if (kind_ == Kind::Piecewise) {
    if (floor_ <= 0.0) throw DomainError("server without capacity never completes work");
    const double target = cumulative(start) + work;
    const auto it = std::upper_bound(cum_at_start_.begin(), cum_at_start_.end(), target);
    const std::size_t k = static_cast<std::size_t>(it - cum_at_start_.begin()) - 1;
    return std::max(start, starts_[k] + (target - cum_at_start_[k]) / rates_[k]);
  }
  // m >= floor bounds the completion time from above.
  const double base = cumulative(start);
  double lo = start;
  double hi = start + work / floor_;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cumulative(mid) - base >= work) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

ServiceProfile ServiceProfile::scaled(double factor) const {
  if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
  switch (kind_) {
    case Kind::Constant:
      return constant(rates_[0] * factor);
    case Kind::Piecewise: {
      if (floor_ <= 0.0) return *this;
      std::vector<double> r = rates_;
      for (double& v : r) v *= factor;
      return piecewise(starts_, std::move(r));
    }
    case Kind::Custom:
      return custom([f = rate_fn_, factor](double s) { return factor * f(s); }, floor_ * factor);
  }
  return *this;
}

}  // namespace sjfa
