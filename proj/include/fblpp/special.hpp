#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fblpp {

inline constexpr double kSqrt2Pi = 2.5066282746310005024;
inline constexpr double kSqrtPi = 1.7724538509055160273;
inline constexpr double kSqrtHalfPi = 1.2533141373155002512;
inline constexpr double kLog2E = 1.4426950408889634074;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

// Gaussian tail probability Q(t) = P[N(0,1) > t] = erfc(t/sqrt 2)/2.
// Deep-tail results below 1e-320 are clamped to zero.
inline double q_function(double t) {
  if (!std::isfinite(t)) throw std::domain_error("q_function: non-finite argument");
  const double v = 0.5 * std::erfc(t * kInvSqrt2);
  return v < 1e-320 ? 0.0 : v;
}

inline double erf(double t) {
  if (!std::isfinite(t)) throw std::domain_error("erf: non-finite argument");
  return std::erf(t);
}

// Scaled complementary error function exp(x^2) erfc(x) for x >= 0.
// Direct product up to x = 26 (both factors representable), asymptotic
// series beyond, where erfc itself would underflow.
inline double erfcx(double x) {
  if (!(x >= 0.0)) throw std::domain_error("erfcx: requires x >= 0");
  if (x <= 26.0) return std::exp(x * x) * std::erfc(x);
  const double r = 1.0 / (2.0 * x * x);
  // 1 - 1!!r + 3!!r^2 - 5!!r^3 + ...  (converges fast for x > 26)
  double sum = 1.0, term = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(2 * k - 1) * r;
    sum += term;
  }
  return sum / (x * kSqrtPi);
}

namespace detail {

// Unregularized lower incomplete gamma by power series,
// gamma(s,x) = x^s e^{-x} sum_n x^n / (s (s+1) ... (s+n)).  Good for x < s+1.
inline double gamma_lower_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < 500; ++n) {
    term *= x / (s + n);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum * std::exp(-x + s * std::log(x));
}

// Unregularized upper incomplete gamma by Lentz continued fraction.
// Good for x >= s+1.
inline double gamma_upper_cf(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 3e-16) break;
  }
  return std::exp(-x + s * std::log(x)) * h;
}

}  // namespace detail

// Upper incomplete gamma, unregularized convention:
//   gamma_upper(s, x) = int_x^inf u^{s-1} e^{-u} du,  gamma_upper(s, 0) = Gamma(s).
// The regularized value is gamma_upper(s, x) / Gamma(s).
inline double gamma_upper(double s, double x) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("gamma_upper: requires s > 0");
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("gamma_upper: requires x >= 0");
  if (x == 0.0) return std::tgamma(s);
  if (x < s + 1.0) return std::tgamma(s) - detail::gamma_lower_series(s, x);
  return detail::gamma_upper_cf(s, x);
}

// Lower incomplete gamma, unregularized: int_0^x u^{s-1} e^{-u} du.
// Computed at full relative precision for small x (no cancellation against
// Gamma(s)), which the closed-form outage expressions rely on.
inline double gamma_lower(double s, double x) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("gamma_lower: requires s > 0");
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("gamma_lower: requires x >= 0");
  if (x == 0.0) return 0.0;
  if (x < s + 1.0) return detail::gamma_lower_series(s, x);
  return std::tgamma(s) - detail::gamma_upper_cf(s, x);
}

}  // namespace fblpp
