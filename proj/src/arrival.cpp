#include "sjfa/arrival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "sjfa/errors.hpp"

namespace sjfa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double piecewise_linear_eval(const std::vector<double>& xs, const std::vector<double>& cums, double x) {
  if (x <= xs.front()) return 0.0;
  if (x >= xs.back()) return cums.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  return cums[lo] + (cums[hi] - cums[lo]) * (x - xs[lo]) / (xs[hi] - xs[lo]);
}

/// Count measure pi(dz)/z on [min_size, inf) for piecewise-linear W, with the
/// work below min_size lumped into jobs of size min_size.
struct SizePieces {
  struct Piece {
    double lo, hi, count;
  };
  std::vector<Piece> pieces;
  std::vector<double> cum;
  double total = 0.0;

  SizePieces(const std::vector<double>& xs, const std::vector<double>& cums, double delta) {
    const double lump = piecewise_linear_eval(xs, cums, delta);
    if (lump > 0.0) pieces.push_back({delta, delta, lump / delta});
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      const double density = (cums[k + 1] - cums[k]) / (xs[k + 1] - xs[k]);
      const double lo = std::max(xs[k], delta);
      const double hi = xs[k + 1];
      if (!(hi > lo) || density <= 0.0) continue;
      pieces.push_back({lo, hi, density * std::log(hi / lo)});
    }
    for (const Piece& p : pieces) cum.push_back(total += p.count);
  }

  double quantile(double u) const {
    const double target = u * total;
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    if (it == cum.end()) --it;
    const std::size_t k = static_cast<std::size_t>(it - cum.begin());
    const Piece& p = pieces[k];
    if (p.lo == p.hi) return p.lo;
    const double before = k == 0 ? 0.0 : cum[k - 1];
    const double v = std::clamp((target - before) / p.count, 0.0, 1.0);
    return p.lo * std::pow(p.hi / p.lo, v);
  }
};

}  // namespace

InstantaneousArrival InstantaneousArrival::piecewise_linear(std::vector<double> xs, std::vector<double> cums,
                                                            std::function<double(double)> scale,
                                                            double scale_bound) {
  if (xs.size() < 2 || xs.size() != cums.size()) throw DomainError("piecewise-linear arrival needs >= 2 matching points");
  if (xs.front() < 0.0) throw DomainError("arrival sizes must be nonnegative");
  if (cums.front() != 0.0) throw DomainError("arrival table must start at zero mass (atoms are not fluid data)");
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (!(xs[k] > xs[k - 1])) throw DomainError("arrival table sizes must increase");
    if (cums[k] < cums[k - 1]) throw DomainError("arrival table masses must be nondecreasing");
  }
  InstantaneousArrival a;
  a.kind_ = Kind::PiecewiseLinear;
  a.xs_ = std::move(xs);
  a.cums_ = std::move(cums);
  a.scale_ = std::move(scale);
  a.rate_bound_ = a.cums_.back() * (a.scale_ ? scale_bound : 1.0);
  a.description_ = "piecewise_linear";
  auto xs_ptr = std::make_shared<std::vector<double>>(a.xs_);
  auto cums_ptr = std::make_shared<std::vector<double>>(a.cums_);
  if (a.scale_) {
    a.pi_ = [xs_ptr, cums_ptr, scale = a.scale_](double s, double x) {
      if (std::isinf(x)) return x > 0 ? scale(s) * cums_ptr->back() : 0.0;
      const double h = scale(s);
      return h * piecewise_linear_eval(*xs_ptr, *cums_ptr, x / h);
    };
  } else {
    a.pi_ = [xs_ptr, cums_ptr](double, double x) {
      if (std::isinf(x)) return x > 0 ? cums_ptr->back() : 0.0;
      return piecewise_linear_eval(*xs_ptr, *cums_ptr, x);
    };
  }
  return a;
}

InstantaneousArrival InstantaneousArrival::uniform() {
  auto a = piecewise_linear({0.0, 1.0}, {0.0, 1.0});
  a.description_ = "uniform";
  return a;
}

double InstantaneousArrival::triangular_wave_height(double s) {
  const double r = s - 2.0 * std::floor(s / 2.0);
  return r <= 1.0 ? 0.5 + 0.5 * r : 1.0 - 0.5 * (r - 1.0);
}

InstantaneousArrival InstantaneousArrival::triangular_wave() {
  auto a = piecewise_linear({0.0, 1.0}, {0.0, 1.0}, &InstantaneousArrival::triangular_wave_height, 1.0);
  a.description_ = "triangular_wave";
  return a;
}

InstantaneousArrival InstantaneousArrival::pareto(double eta) {
  if (!(eta > 1.0) || !std::isfinite(eta)) throw DomainError("Pareto arrival needs eta > 1");
  InstantaneousArrival a;
  a.kind_ = Kind::Pareto;
  a.eta_ = eta;
  a.rate_bound_ = 1.0;
  a.description_ = "pareto";
  a.pi_ = [eta](double, double x) { return x >= 1.0 ? 1.0 - std::pow(x, -eta) : 0.0; };
  return a;
}

InstantaneousArrival InstantaneousArrival::custom(std::function<double(double, double)> pi, double rate_bound) {
  if (!pi) throw DomainError("custom arrival without a cumulative function");
  InstantaneousArrival a;
  a.kind_ = Kind::Custom;
  a.pi_ = std::move(pi);
  a.rate_bound_ = rate_bound;
  a.description_ = "custom";
  return a;
}

InstantaneousArrival InstantaneousArrival::none() {
  InstantaneousArrival a;
  a.kind_ = Kind::None;
  a.pi_ = [](double, double) { return 0.0; };
  a.description_ = "empty";
  return a;
}

double InstantaneousArrival::rate(double s) const { return pi_(s, kInf); }

JobStream InstantaneousArrival::job_stream(double min_size) const {
  if (!(min_size > 0.0)) throw DomainError("job stream minimum size must be positive");
  switch (kind_) {
    case Kind::None:
      return {[](double) { return 0.0; }, 0.0, [](double, double) { return 0.0; }};
    case Kind::Pareto: {
      // Work density eta y^{-eta-1} on [1, inf) -> job sizes Pareto(eta + 1).
      const double eta = eta_;
      const double rate = eta / (eta + 1.0);
      return {[rate](double) { return rate; }, rate,
              [eta](double, double u) { return std::pow(1.0 - u, -1.0 / (eta + 1.0)); }};
    }
    case Kind::PiecewiseLinear: {
      auto pieces = std::make_shared<SizePieces>(xs_, cums_, min_size);
      const double rate = pieces->total;
      // Sizes scale with a(s); the job count per unit time does not.
      auto scale = scale_;
      return {[rate](double) { return rate; }, rate, [pieces, scale](double s, double u) {
                const double z = pieces->quantile(u);
                return scale ? scale(s) * z : z;
              }};
    }
    case Kind::Custom:
      break;
  }
  throw DomainError("custom arrivals given only by pi cannot be simulated; use a table or a named example");
}

}  // namespace sjfa
