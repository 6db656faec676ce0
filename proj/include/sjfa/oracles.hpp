#pragma once

namespace sjfa::oracles {

enum class Which { alpha, alpha_prime, beta_prime, xi_prime, xi };

/// Work uniform on [0, 1] at unit rate, linear aging with c = 1. alpha and
/// alpha_prime hold for all t >= 0; beta_prime, xi_prime and xi assume
/// mu(t) = t / 2 and t > 1 (DomainError otherwise). alpha and xi are
/// cumulative in x on the original plane, the others in x' on the prime plane.
double uniform_linear(double t, double x, Which which);

/// Branch helpers of the triangular-wave example, y = x + t.
struct TriangularHelpers {
  double n;        ///< 2 floor(y / 2)
  double a1;       ///< (1 + floor(y)) / 2
  double s1_star;  ///< 2 (y - a1), crossing on a falling piece
  double a2;       ///< 1/2 - floor(y / 2)
  double s2_star;  ///< 2 (y - a2) / 3, crossing on a rising piece
  bool d1;         ///< n <= y < n + 1/2; otherwise d2
};

TriangularHelpers triangular_helpers(double x, double t);

/// alpha_t(-inf, x] for work uniform on [0, a(s)] with a the triangular
/// wave, linear aging with c = 1. Throws BranchGap if no branch applies.
double triangular_alpha(double t, double x);

/// Pareto(1, eta) work at unit rate, linear aging with c = 1. Only alpha and
/// alpha_prime are available; eta > 1.
double pareto_linear(double t, double x, Which which, double eta);

/// Pareto(1, eta) work at unit rate, exponential aging with rate lambda.
double pareto_exponential(double t, double x, Which which, double eta, double lambda);

}  // namespace sjfa::oracles
