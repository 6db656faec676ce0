#include "sjfa/aging.hpp"

#include <cmath>
#include <string>

#include "sjfa/errors.hpp"
#include "sjfa/rng.hpp"

namespace sjfa {

AgingRule AgingRule::linear(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidRule("linear aging needs c >= 0, got " + std::to_string(c));
  AgingRule r;
  r.kind_ = AgingKind::Linear;
  r.param_ = c;
  r.lipschitz_ = 0.0;
  r.rhs_ = [c](double, double) { return -c; };
  r.analytic_ = [c](double x, double t, double s) { return x - c * (s - t); };
  return r;
}

AgingRule AgingRule::exponential(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidRule("exponential aging needs lambda > 0, got " + std::to_string(lambda));
  AgingRule r;
  r.kind_ = AgingKind::Exponential;
  r.param_ = lambda;
  r.lipschitz_ = lambda;
  r.rhs_ = [lambda](double g, double) { return -lambda * g; };
  r.analytic_ = [lambda](double x, double t, double s) { return x * std::exp(-lambda * (s - t)); };
  return r;
}

AgingRule AgingRule::custom(Rhs rhs, double lipschitz, ProbeBox box, std::optional<Trajectory> analytic,
                            std::uint64_t probe_seed) {
  if (!rhs) throw InvalidRule("custom rule without a right-hand side");
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) throw InvalidRule("Lipschitz constant must be finite and >= 0");
  if (!(box.x_max > box.x_min) || !(box.t_max >= box.t_min) || box.t_min < 0.0)
    throw InvalidRule("degenerate probe box");

  SplitMix64 rng(probe_seed);
  for (int k = 0; k < kLipschitzProbes; ++k) {
    const double x1 = box.x_min + (box.x_max - box.x_min) * rng.uniform();
    const double x2 = box.x_min + (box.x_max - box.x_min) * rng.uniform();
    const double t = box.t_min + (box.t_max - box.t_min) * rng.uniform();
    const double lhs = std::abs(rhs(x1, t) - rhs(x2, t));
    if (!std::isfinite(lhs) || lhs > lipschitz * std::abs(x1 - x2) + kLipschitzSlack) {
      throw InvalidRule("declared Lipschitz constant " + std::to_string(lipschitz) + " violated at x1=" +
                        std::to_string(x1) + " x2=" + std::to_string(x2) + " t=" + std::to_string(t));
    }
  }

  AgingRule r;
  r.kind_ = AgingKind::Custom;
  r.lipschitz_ = lipschitz;
  r.rhs_ = std::move(rhs);
  if (analytic) r.analytic_ = std::move(*analytic);
  return r;
}

double AgingRule::rhs(double g, double s) const { return rhs_(g, s); }

double AgingRule::tolerance(double horizon) const {
  if (analytic_) return 0.0;
  // Conservative constant on top of the RK4 global error h^4 e^{LT}.
  constexpr double kBudget = 1e4;
  const double h = kRk4Step;
  return kBudget * h * h * h * h * std::exp(lipschitz_ * horizon);
}

namespace {

double rk4_step(const AgingRule::Rhs& f, double g, double s, double h) {
  const double k1 = f(g, s);
  const double k2 = f(g + 0.5 * h * k1, s + 0.5 * h);
  const double k3 = f(g + 0.5 * h * k2, s + 0.5 * h);
  const double k4 = f(g + h * k3, s + h);
  return g + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
}

}  // namespace

double AgingRule::integrate(double x, double t, double s) const {
  const double span = s - t;
  const auto steps = static_cast<long>(std::ceil(std::abs(span) / kRk4Step - 1e-9));
  if (steps <= 0) return x;
  const double h = span / static_cast<double>(steps);
  double g = x;
  for (long k = 0; k < steps; ++k) g = rk4_step(rhs_, g, t + h * static_cast<double>(k), h);
  return g;
}

double AgingRule::trajectory(double x, double t, double s) const {
  if (s == t || std::isinf(x)) return x;
  const double g = analytic_ ? analytic_(x, t, s) : integrate(x, t, s);
  if (!std::isfinite(g)) {
    throw NonFiniteTrajectory("g_(" + std::to_string(x) + "," + std::to_string(t) + ")(" + std::to_string(s) +
                              ") is not finite");
  }
  return g;
}

std::vector<double> AgingRule::trajectory_along(double x, double t, std::span<const double> times) const {
  std::vector<double> out(times.size());
  if (analytic_ || std::isinf(x)) {
    for (std::size_t i = 0; i < times.size(); ++i) out[i] = trajectory(x, t, times[i]);
    return out;
  }
  // Walk outward from the anchor so each segment reuses the previous value.
  double g = x;
  double at = t;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t) continue;
    g = integrate(g, at, times[i]);
    at = times[i];
    out[i] = g;
  }
  g = x;
  at = t;
  for (std::size_t i = times.size(); i-- > 0;) {
    if (times[i] >= t) continue;
    g = integrate(g, at, times[i]);
    at = times[i];
    out[i] = g;
  }
  for (double v : out) {
    if (!std::isfinite(v)) throw NonFiniteTrajectory("non-finite value along trajectory");
  }
  return out;
}

double trajectory(const AgingRule& rule, double x, double t, double s) { return rule.trajectory(x, t, s); }

PlanePoint to_prime(const AgingRule& rule, PlanePoint p) { return {rule.trajectory(p.x, p.t, 0.0), p.t}; }

PlanePoint from_prime(const AgingRule& rule, PlanePoint p_prime) {
  return {rule.trajectory(p_prime.x, 0.0, p_prime.t), p_prime.t};
}

bool separation_bound(const AgingRule& rule, double x1, double x2, double t, double s) {
  const double gap = std::abs(rule.trajectory(x2, t, s) - rule.trajectory(x1, t, s));
  const double bound = std::abs(x2 - x1) * std::exp(rule.lipschitz() * std::abs(s - t));
  const double slack = 2.0 * rule.tolerance(std::max(t, s)) + 1e-12 * std::max(1.0, bound);
  return gap <= bound + slack;
}

}  // namespace sjfa
