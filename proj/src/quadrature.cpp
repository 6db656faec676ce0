#include "sjfa/quadrature.hpp"

#include <algorithm>
#include <string>

namespace sjfa {

namespace {

struct Panel {
  double a, b, fa, fm, fb, whole;
  int depth;
};

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                  int max_depth, double abs_floor) {
  QuadratureResult out;
  if (!(b > a)) return out;

  // A 16-panel pass sizes the absolute tolerance so that a coarse 3-point
  // sample landing on zeros of f does not make the target meaningless.
  constexpr int kSeedDepth = 4;
  constexpr int kSeedPanels = 1 << kSeedDepth;
  const double width = (b - a) / kSeedPanels;
  std::vector<Panel> stack;
  double coarse = 0.0;
  for (int k = kSeedPanels - 1; k >= 0; --k) {
    const double l = a + width * k;
    const double r = k == kSeedPanels - 1 ? b : l + width;
    const double m = 0.5 * (l + r);
    Panel p{l, r, f(l), f(m), f(r), 0.0, kSeedDepth};
    p.whole = simpson(l, r, p.fa, p.fm, p.fb);
    coarse += p.whole;
    stack.push_back(p);
  }
  const double tol = std::max(rel_tol * std::abs(coarse), abs_floor);

  double unconverged = 0.0;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(p.a, m, p.fa, flm, p.fm);
    const double right = simpson(m, p.b, p.fm, frm, p.fb);
    const double diff = left + right - p.whole;
    const double local_tol = tol * (p.b - p.a) / (b - a);
    const int depth = p.depth + 1;
    out.max_depth_reached = std::max(out.max_depth_reached, depth);
    if (std::abs(diff) <= 15.0 * local_tol || depth >= max_depth) {
      out.value += left + right + diff / 15.0;
      const double err = std::abs(diff) / 15.0;
      out.error_estimate += err;
      if (std::abs(diff) > 15.0 * local_tol) unconverged += err;
      continue;
    }
    stack.push_back({m, p.b, p.fm, frm, p.fb, right, depth});
    stack.push_back({p.a, m, p.fa, flm, p.fm, left, depth});
  }
  if (!std::isfinite(out.value)) throw QuadratureFailure("integrand produced a non-finite value");
  if (unconverged > std::max(rel_tol * std::abs(out.value), abs_floor)) {
    throw QuadratureFailure("estimated error " + std::to_string(unconverged) + " above tolerance at depth " +
                            std::to_string(max_depth));
  }
  return out;
}

}  // namespace sjfa
