#include "sjfa/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "sjfa/errors.hpp"

namespace sjfa {

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.location) || !std::isfinite(a.mass) || !(a.mass > 0.0))
      throw DomainError("atoms need finite locations and positive finite masses");
  }
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
  locations_.reserve(atoms.size());
  masses_.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!locations_.empty() && locations_.back() == a.location) {
      masses_.back() += a.mass;
    } else {
      locations_.push_back(a.location);
      masses_.push_back(a.mass);
    }
  }
  prefix_.resize(masses_.size());
  double run = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) prefix_[i] = (run += masses_[i]);
}

double AtomicMeasure::cumulative(double x) const {
  const auto it = std::upper_bound(locations_.begin(), locations_.end(), x);
  if (it == locations_.begin()) return 0.0;
  return prefix_[static_cast<std::size_t>(it - locations_.begin()) - 1];
}

double AtomicMeasure::left_limit(double x) const {
  const auto it = std::lower_bound(locations_.begin(), locations_.end(), x);
  if (it == locations_.begin()) return 0.0;
  return prefix_[static_cast<std::size_t>(it - locations_.begin()) - 1];
}

double AtomicMeasure::max_atom() const {
  return masses_.empty() ? 0.0 : *std::max_element(masses_.begin(), masses_.end());
}

CdfSlice CdfSlice::atomic(AtomicMeasure m) {
  CdfSlice s;
  s.is_atomic_ = true;
  s.total_ = m.total();
  s.atoms_ = std::move(m);
  return s;
}

CdfSlice CdfSlice::function(std::function<double(double)> cdf, std::vector<double> knots) {
  CdfSlice s;
  s.total_ = cdf(MeasurePath::kInf);
  s.cdf_ = std::move(cdf);
  s.knots_ = std::move(knots);
  return s;
}

double CdfSlice::operator()(double x) const { return is_atomic_ ? atoms_.cumulative(x) : cdf_(x); }

double CdfSlice::left_limit(double x) const { return is_atomic_ ? atoms_.left_limit(x) : cdf_(x); }

std::span<const double> CdfSlice::knots() const {
  return is_atomic_ ? atoms_.locations() : std::span<const double>(knots_);
}

double cdf_excess(const CdfSlice& a, const CdfSlice& b, double eps) {
  // A(x) - B(x+eps) is piecewise monotone between the jumps of A and of B(.+eps);
  // the supremum sits at a jump of A (right value) or just before a jump of B.
  double worst = std::max(0.0, a.total() - b.total());
  for (double k : a.knots()) worst = std::max(worst, a(k) - b(k + eps));
  for (double k : b.knots()) worst = std::max(worst, a.left_limit(k - eps) - b.left_limit(k));
  return worst;
}

namespace {

bool levy_ok(const CdfSlice& a, const CdfSlice& b, double eps) {
  return cdf_excess(a, b, eps) <= eps && cdf_excess(b, a, eps) <= eps;
}

double diameter(const CdfSlice& a, const CdfSlice& b) {
  double lo = MeasurePath::kInf;
  double hi = -MeasurePath::kInf;
  for (const CdfSlice* s : {&a, &b}) {
    auto k = s->knots();
    if (k.empty()) continue;
    lo = std::min(lo, k.front());
    hi = std::max(hi, k.back());
  }
  return hi >= lo ? hi - lo : 0.0;
}

}  // namespace

double levy_distance(const CdfSlice& a, const CdfSlice& b, double resolution) {
  double hi = std::max(a.total(), b.total());
  if (a.is_atomic() && b.is_atomic()) hi = std::min(hi, std::abs(a.total() - b.total()) + diameter(a, b));
  if (!(hi > 0.0)) return 0.0;
  while (!levy_ok(a, b, hi)) hi *= 2.0;
  if (levy_ok(a, b, 0.0)) return 0.0;
  double lo = 0.0;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    if (levy_ok(a, b, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

MeasurePath MeasurePath::sampled(Grid grid, std::vector<AtomicMeasure> measures, double horizon) {
  if (grid.empty() || grid.size() != measures.size()) throw DomainError("sampled path needs one measure per grid point");
  if (grid.front() != 0.0 || !is_sorted_strict(grid)) throw DomainError("sampled path grid must start at 0 and increase");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  MeasurePath p;
  p.grid_ = std::move(grid);
  p.measures_ = std::move(measures);
  p.horizon_ = horizon;
  return p;
}

MeasurePath MeasurePath::analytic(Eval eval, double horizon) {
  if (!eval) throw DomainError("analytic path without evaluator");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  MeasurePath p;
  p.eval_ = std::move(eval);
  p.horizon_ = horizon;
  return p;
}

MeasurePath MeasurePath::zero(double horizon) {
  return analytic([](double, double) { return 0.0; }, horizon);
}

void MeasurePath::check_time(double t) const {
  if (!(t >= 0.0) || t > horizon_ * (1.0 + 1e-12)) {
    throw OutOfHorizon("t=" + format_real(t) + " outside [0, " + format_real(horizon_) + "]");
  }
}

const AtomicMeasure& MeasurePath::measure_at(double t) const {
  check_time(t);
  if (eval_) throw DomainError("analytic path has no atomic slices");
  return measures_[snap_left(grid_, t)];
}

double MeasurePath::cumulative(double t, double x) const {
  check_time(t);
  if (eval_) return eval_(t, x);
  return measures_[snap_left(grid_, t)].cumulative(x);
}

CdfSlice MeasurePath::slice(double t, std::span<const double> probe_x) const {
  if (!eval_) return CdfSlice::atomic(measure_at(t));
  check_time(t);
  return CdfSlice::function([eval = eval_, t](double x) { return eval(t, x); },
                            std::vector<double>(probe_x.begin(), probe_x.end()));
}

bool nondecreasing_in_t(const MeasurePath& path, std::span<const double> t_probe, std::span<const double> x_probe,
                        double tol) {
  for (double x : x_probe) {
    double prev = -MeasurePath::kInf;
    for (double t : t_probe) {
      const double v = path.cumulative(t, x);
      if (v < prev - tol * std::max(1.0, std::abs(prev))) return false;
      prev = std::max(prev, v);
    }
  }
  return true;
}

double max_increment(const MeasurePath& path, double t, std::span<const double> x_probe) {
  double worst = 0.0;
  for (std::size_t i = 1; i < x_probe.size(); ++i)
    worst = std::max(worst, path.cumulative(t, x_probe[i]) - path.cumulative(t, x_probe[i - 1]));
  return worst;
}

double path_distance(const MeasurePath& p1, const MeasurePath& p2, std::span<const double> probe_times,
                     std::span<const double> probe_x) {
  double worst = 0.0;
  for (double t : probe_times) worst = std::max(worst, levy_distance(p1.slice(t, probe_x), p2.slice(t, probe_x)));
  return worst;
}

MeasurePath transport_F(const MeasurePath& path, const AgingRule& rule, Direction direction) {
  if (path.is_sampled()) {
    std::vector<AtomicMeasure> moved;
    moved.reserve(path.measures().size());
    for (std::size_t k = 0; k < path.grid().size(); ++k) {
      const double t = path.grid()[k];
      const AtomicMeasure& m = path.measures()[k];
      std::vector<Atom> atoms(m.size());
      for (std::size_t i = 0; i < m.size(); ++i) {
        const PlanePoint p{m.locations()[i], t};
        atoms[i].location = direction == Direction::Forward ? to_prime(rule, p).x : from_prime(rule, p).x;
        atoms[i].mass = m.mass_at(i);
      }
      moved.emplace_back(std::move(atoms));
    }
    return MeasurePath::sampled(path.grid(), std::move(moved), path.horizon());
  }
  if (direction == Direction::Forward) {
    return MeasurePath::analytic(
        [path, rule](double t, double xp) { return path.cumulative(t, from_prime(rule, {xp, t}).x); },
        path.horizon());
  }
  return MeasurePath::analytic(
      [path, rule](double t, double x) { return path.cumulative(t, to_prime(rule, {x, t}).x); }, path.horizon());
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

void write_slices_csv(std::ostream& out, const MeasurePath& path, std::span<const double> tgrid,
                      std::span<const double> xgrid) {
  out << "t,x,mass\n";
  for (double t : tgrid) {
    for (double x : xgrid) out << format_real(t) << ',' << format_real(x) << ',' << format_real(path.cumulative(t, x)) << '\n';
  }
}

}  // namespace sjfa
