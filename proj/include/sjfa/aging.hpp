#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace sjfa {

enum class AgingKind { Linear, Exponential, Custom };

/// Point on the time-priority plane.
struct PlanePoint {
  double x = 0.0;
  double t = 0.0;
};

/// Rectangle in which a Custom rule's declared Lipschitz constant is probed.
struct ProbeBox {
  double x_min = -10.0;
  double x_max = 10.0;
  double t_min = 0.0;
  double t_max = 10.0;
};

/// Aging rule dg/ds = f(g, s). Trajectories of a rule never cross, which is
/// what lets a job be ranked by the value its trajectory takes at time 0.
///
/// Linear and exponential rules carry closed-form trajectories. Custom rules
/// are integrated with fixed-step RK4 (step `kRk4Step`) unless an analytic
/// trajectory is supplied. Values are immutable once built.
class AgingRule {
 public:
  using Rhs = std::function<double(double g, double s)>;
  using Trajectory = std::function<double(double x, double t, double s)>;

  static constexpr double kRk4Step = 1e-3;
  static constexpr int kLipschitzProbes = 10000;
  static constexpr double kLipschitzSlack = 1e-9;

  /// f(g, s) = -c. c = 0 gives plain SJF (no aging).
  static AgingRule linear(double c);
  /// f(g, s) = -lambda g.
  static AgingRule exponential(double lambda);
  /// Validates `lipschitz` on kLipschitzProbes random pairs drawn from `box`;
  /// throws InvalidRule if the declared constant is violated.
  static AgingRule custom(Rhs rhs, double lipschitz, ProbeBox box = {},
                          std::optional<Trajectory> analytic = std::nullopt,
                          std::uint64_t probe_seed = 0x5eed);

  AgingKind kind() const { return kind_; }
  double c() const { return param_; }
  double lambda() const { return param_; }
  double lipschitz() const { return lipschitz_; }
  double rhs(double g, double s) const;
  bool has_analytic() const { return static_cast<bool>(analytic_); }

  /// Error budget for equality tests on trajectories over [0, horizon]:
  /// exact for closed forms, O(h^4 e^{L T}) for RK4.
  double tolerance(double horizon) const;

  /// g_{(x,t)}(s).
  double trajectory(double x, double t, double s) const;

  /// g_{(x,t)}(s) for every s in the sorted `times`, reusing integration
  /// state between consecutive points. Same values as repeated trajectory()
  /// calls up to RK4 step placement.
  std::vector<double> trajectory_along(double x, double t, std::span<const double> times) const;

 private:
  AgingRule() = default;
  double integrate(double x, double t, double s) const;

  AgingKind kind_ = AgingKind::Linear;
  double param_ = 0.0;
  double lipschitz_ = 0.0;
  Rhs rhs_;
  Trajectory analytic_;
};

double trajectory(const AgingRule& rule, double x, double t, double s);

/// (x, t) -> (g_{(x,t)}(0), t).
PlanePoint to_prime(const AgingRule& rule, PlanePoint p);

/// (x', t') -> (g_{(x',0)}(t'), t').
PlanePoint from_prime(const AgingRule& rule, PlanePoint p_prime);

/// Checks |g_{(x2,t)}(s) - g_{(x1,t)}(s)| <= |x2 - x1| e^{L|s-t|} + tolerance.
bool separation_bound(const AgingRule& rule, double x1, double x2, double t, double s);

}  // namespace sjfa
