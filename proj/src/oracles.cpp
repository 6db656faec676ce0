#include "sjfa/oracles.hpp"

#include <cmath>
#include <string>

#include "sjfa/errors.hpp"

namespace sjfa::oracles {

namespace {

void check_eta(double eta) {
  if (!(eta > 1.0) || !std::isfinite(eta)) throw DomainError("Pareto shape must exceed 1, got " + std::to_string(eta));
}

[[noreturn]] void unsupported(const char* example) {
  throw DomainError(std::string(example) + " has closed forms for alpha and alpha_prime only");
}

// Work served by time u under the triangular wave: int_0^u a(s) ds.
double wave_work(double u) {
  const double fl = std::floor(u);
  const double f = u - fl;
  if (static_cast<long long>(fl) % 2 != 0) return 0.75 * fl + f - f * f / 4.0;
  return 0.75 * fl + f / 2.0 + f * f / 4.0;
}

}  // namespace

double uniform_linear(double t, double x, Which which) {
  switch (which) {
    case Which::alpha:
      if (x >= 1.0) return t;
      if (x >= 0.0) return x > 1.0 - t ? t + x - x * x / 2.0 - 0.5 : x * t + t * t / 2.0;
      if (x > 1.0 - t) return x + t - 0.5;
      if (x <= -t) return 0.0;
      return (x + t) * (x + t) / 2.0;
    case Which::alpha_prime: {
      const double xp = x;
      if (xp >= 1.0 + t) return t;
      if (xp >= t) return xp > 1.0 ? xp - (xp - t) * (xp - t) / 2.0 - 0.5 : xp * t - t * t / 2.0;
      if (xp > 1.0) return xp - 0.5;
      if (xp < 0.0) return 0.0;
      return xp * xp / 2.0;
    }
    default:
      break;
  }
  if (!(t > 1.0)) throw DomainError("uniform_linear beta_prime, xi_prime and xi need t > 1 with mu(t) = t/2");
  switch (which) {
    case Which::beta_prime:
      if (x >= (1.0 + t) / 2.0) return t / 2.0;
      if (x > 1.0) return x - 0.5;
      if (x < 0.0) return 0.0;
      return x * x / 2.0;
    case Which::xi_prime:
      if (x >= 1.0 + t) return t / 2.0;
      if (x >= t) return x - (x - t) * (x - t) / 2.0 - 0.5 - t / 2.0;
      if (x >= (t + 1.0) / 2.0) return x - (1.0 + t) / 2.0;
      return 0.0;
    case Which::xi:
      if (x >= 1.0) return t / 2.0;
      if (x >= 0.0) return x + t - x * x / 2.0 - 0.5 - t / 2.0;
      if (x >= (1.0 - t) / 2.0) return x + (t - 1.0) / 2.0;
      return 0.0;
    default:
      throw DomainError("unknown uniform_linear quantity");
  }
}

TriangularHelpers triangular_helpers(double x, double t) {
  const double y = x + t;
  TriangularHelpers h{};
  h.n = 2.0 * std::floor(y / 2.0);
  h.a1 = (1.0 + std::floor(y)) / 2.0;
  h.s1_star = 2.0 * (y - h.a1);
  h.a2 = 0.5 - std::floor(y / 2.0);
  h.s2_star = 2.0 * (y - h.a2) / 3.0;
  h.d1 = h.n <= y && y < h.n + 0.5;
  return h;
}

double triangular_alpha(double t, double x) {
  const double y = x + t;
  if (y < 0.0) return 0.0;
  const TriangularHelpers h = triangular_helpers(x, t);
  const double s = h.d1 ? h.s1_star : h.s2_star;

  if (t <= s) return wave_work(t);
  if (s >= 0.0 && s < t && t <= y) {
    const double fl = std::floor(s);
    const double f = s - fl;
    const double head = h.d1 ? 0.75 * fl + f - f * f / 4.0 : 0.75 * fl + f / 2.0 + f * f / 4.0;
    return head + y * (t - s) - (t * t - s * s) / 2.0;
  }
  if (s < 0.0 && 0.0 <= t && t <= y) return x * t + t * t / 2.0;
  if (s < 0.0 && 0.0 <= y && y < t) return y * y / 2.0;
  if (s >= 0.0 && s < y && y < t) {
    const double fl = std::floor(s);
    const double f = s - fl;
    const double head = h.d1 ? 0.75 * fl + f - f * f / 4.0 : 0.75 * fl + f / 2.0 + f * f / 4.0;
    return head + y * (y - s) - (y * y - s * s) / 2.0;
  }
  throw BranchGap("no triangular-wave branch for t=" + std::to_string(t) + ", x=" + std::to_string(x));
}

double pareto_linear(double t, double x, Which which, double eta) {
  check_eta(eta);
  const double k = eta - 1.0;
  switch (which) {
    case Which::alpha:
      if (x < 1.0 - t) return 0.0;
      if (x <= 1.0) return x + t - 1.0 + (std::pow(x + t, 1.0 - eta) - 1.0) / k;
      return t + (std::pow(x + t, 1.0 - eta) - std::pow(x, 1.0 - eta)) / k;
    case Which::alpha_prime:
      if (x < 1.0) return 0.0;
      if (x <= 1.0 + t) return x - 1.0 + (std::pow(x, 1.0 - eta) - 1.0) / k;
      return t + (std::pow(x, 1.0 - eta) - std::pow(x - t, 1.0 - eta)) / k;
    default:
      unsupported("pareto_linear");
  }
}

double pareto_exponential(double t, double x, Which which, double eta, double lambda) {
  check_eta(eta);
  if (!(lambda > 0.0)) throw DomainError("exponential aging rate must be positive");
  const double le = lambda * eta;
  switch (which) {
    case Which::alpha:
      if (x <= std::exp(-lambda * t)) return 0.0;
      if (x < 1.0) return t + std::log(x) / lambda - std::pow(x, -eta) * (std::pow(x, eta) - std::exp(-le * t)) / le;
      return t - std::pow(x, -eta) * (1.0 - std::exp(-le * t)) / le;
    case Which::alpha_prime:
      if (x <= 1.0) return 0.0;
      if (x < std::exp(lambda * t)) return std::log(x) / lambda - (1.0 - std::pow(x, -eta)) / le;
      return t - std::pow(x, -eta) * std::expm1(le * t) / le;
    default:
      unsupported("pareto_exponential");
  }
}

}  // namespace sjfa::oracles
