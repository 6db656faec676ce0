#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sjfa/aging.hpp"
#include "sjfa/grid.hpp"

namespace sjfa {

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// Finite sum of point masses. Atoms at equal locations are merged on construction.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms);

  /// nu(-inf, x]
  double cumulative(double x) const;
  /// nu(-inf, x)
  double left_limit(double x) const;
  double total() const { return prefix_.empty() ? 0.0 : prefix_.back(); }
  bool empty() const { return locations_.empty(); }
  std::size_t size() const { return locations_.size(); }
  std::span<const double> locations() const { return locations_; }
  double mass_at(std::size_t i) const { return masses_[i]; }
  double max_atom() const;

 private:
  std::vector<double> locations_;
  std::vector<double> masses_;
  std::vector<double> prefix_;
};

/// One time-slice of a measure path, seen through its cumulative function.
/// Atomic slices are evaluated exactly; function slices are trusted to be
/// continuous and are inspected only at their knots.
class CdfSlice {
 public:
  static CdfSlice atomic(AtomicMeasure m);
  static CdfSlice function(std::function<double(double)> cdf, std::vector<double> knots);

  double operator()(double x) const;
  double left_limit(double x) const;
  double total() const { return total_; }
  std::span<const double> knots() const;
  bool is_atomic() const { return is_atomic_; }

 private:
  bool is_atomic_ = false;
  AtomicMeasure atoms_;
  std::function<double(double)> cdf_;
  std::vector<double> knots_;
  double total_ = 0.0;
};

/// Smallest eps >= 0 with F1(x-eps)-eps <= F2(x) <= F1(x+eps)+eps for all x,
/// located by bisection to `resolution`. Symmetric in its arguments.
double levy_distance(const CdfSlice& a, const CdfSlice& b, double resolution = 1e-9);

/// sup_x [A(x) - B(x + eps)]; exact when A or B is atomic and the other continuous or atomic.
double cdf_excess(const CdfSlice& a, const CdfSlice& b, double eps);

/// Time-indexed family of finite measures on the line, read as cumulative masses.
class MeasurePath {
 public:
  using Eval = std::function<double(double t, double x)>;

  /// Atomic measures on `grid` (must start at 0); evaluation snaps t left.
  static MeasurePath sampled(Grid grid, std::vector<AtomicMeasure> measures, double horizon);
  /// eval(t, x) = nu_t(-inf, x]; must accept x = +-infinity.
  static MeasurePath analytic(Eval eval, double horizon);
  static MeasurePath zero(double horizon);

  double cumulative(double t, double x) const;
  double total(double t) const { return cumulative(t, kInf); }
  double horizon() const { return horizon_; }
  bool is_sampled() const { return !eval_; }
  const Grid& grid() const { return grid_; }
  const std::vector<AtomicMeasure>& measures() const { return measures_; }
  const AtomicMeasure& measure_at(double t) const;

  /// Slice at time t; analytic slices use `probe_x` as knots.
  CdfSlice slice(double t, std::span<const double> probe_x = {}) const;

  static constexpr double kInf = std::numeric_limits<double>::infinity();

 private:
  void check_time(double t) const;

  Eval eval_;
  Grid grid_;
  std::vector<AtomicMeasure> measures_;
  double horizon_ = 0.0;
};

/// True when t -> nu_t(-inf, x] is nondecreasing (within tol) on every probe pair.
bool nondecreasing_in_t(const MeasurePath& path, std::span<const double> t_probe,
                        std::span<const double> x_probe, double tol = 1e-12);

/// Largest jump of x -> nu_t(-inf, x] between adjacent probe points.
double max_increment(const MeasurePath& path, double t, std::span<const double> x_probe);

double path_distance(const MeasurePath& p1, const MeasurePath& p2, std::span<const double> probe_times,
                     std::span<const double> probe_x = {});

enum class Direction { Forward, Inverse };

/// Forward: nu'_t[0, x'] = nu_t(-inf, g_{(x',0)}(t)]. Inverse: nu_t(-inf, x] = nu'_t[0, g_{(x,t)}(0)].
/// Atoms of sampled paths move along their trajectories; masses are unchanged.
MeasurePath transport_F(const MeasurePath& path, const AgingRule& rule, Direction direction);

/// Rows `t,x,mass`, t outer, 17 significant digits, with header.
void write_slices_csv(std::ostream& out, const MeasurePath& path, std::span<const double> tgrid,
                      std::span<const double> xgrid);

/// "%.17g"
std::string format_real(double v);

}  // namespace sjfa
