#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "fblpp/errors.hpp"
#include "fblpp/quadrature.hpp"
#include "fblpp/sinr.hpp"
#include "fblpp/special.hpp"

namespace fblpp {

// Code of blocklength n and rate r = k/n, plus the constants of the
// linearized block-error kernel:
//   theta = 2^r - 1          zero of the Q argument,
//   beta  = sqrt(n/2pi) (2^{2r} - 1)^{-1/2}   slope scale,
//   window [z_lo, z_hi] = theta -+ sqrt(pi/2)/beta.
// z_lo goes negative for short/low-rate codes (already at n=200, r=0.1);
// integrations clamp it at zero since the SINR support is [0, inf).
struct CodeParams {
  int n = 0;
  std::optional<int> k;
  double rate = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  double z_lo = 0.0;
  double z_hi = 0.0;

  double z_lo_clamped() const { return z_lo > 0.0 ? z_lo : 0.0; }
  bool clamps() const { return z_lo < 0.0; }
};

inline CodeParams code_params_from_rate(int n, double rate) {
  if (n < 1) throw std::domain_error("code_params: blocklength must be >= 1");
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::domain_error("code_params: rate must be positive");
  CodeParams c;
  c.n = n;
  c.rate = rate;
  c.theta = std::expm1(rate * std::numbers::ln2);
  c.beta = std::sqrt(n / (2.0 * std::numbers::pi)) /
           std::sqrt(std::expm1(2.0 * rate * std::numbers::ln2));
  const double half_width = kSqrtHalfPi / c.beta;
  c.z_hi = c.theta + half_width;
  c.z_lo = c.theta - half_width;
  return c;
}

inline CodeParams code_params_from_bits(int n, int k) {
  if (k < 1) throw std::domain_error("code_params: information bits must be >= 1");
  CodeParams c = code_params_from_rate(n, static_cast<double>(k) / n);
  c.k = k;
  return c;
}

enum class Method {
  exact_quadrature,
  linearized,
  closed_ss,
  closed_ss_alpha4,
  closed_micro_op,
  monte_carlo,
};

inline const char* method_name(Method m) {
  switch (m) {
    case Method::exact_quadrature: return "exact";
    case Method::linearized: return "linearized";
    case Method::closed_ss: return "closed_ss";
    case Method::closed_ss_alpha4: return "closed_ss_alpha4";
    case Method::closed_micro_op: return "closed_micro_op";
    case Method::monte_carlo: return "mc";
  }
  return "?";
}

struct OutageEstimate {
  double value = 0.0;
  Method method = Method::exact_quadrature;
  double error_bound = 0.0;  // absolute; meaning depends on the method
  bool clamped_rho = false;  // lower window breakpoint was negative and clamped
};

// Channel dispersion V(z) = (1 - (1+z)^{-2}) (log2 e)^2.
inline double channel_dispersion(double z) {
  if (!(z >= 0.0)) throw std::domain_error("channel_dispersion: requires z >= 0");
  const double a = 1.0 + z;
  return (1.0 - 1.0 / (a * a)) * (kLog2E * kLog2E);
}

// Block error probability of the code conditioned on SINR = z:
//   Q( sqrt(n) (log2(1+z) - r) / sqrt(V(z)) ).
// The capacity gap is computed as log2((1+z)/(1+theta)), which is the same
// quantity but evaluates to exactly 0 at z = theta.  The z = 0 boundary is
// the limit 1.
inline double conditional_error(double z, const CodeParams& c) {
  if (!(z >= 0.0)) throw std::domain_error("conditional_error: requires z >= 0");
  if (z == 0.0) return 1.0;
  const double gap = std::log1p((z - c.theta) / (1.0 + c.theta)) * kLog2E;
  const double arg = std::sqrt(static_cast<double>(c.n)) * gap / std::sqrt(channel_dispersion(z));
  if (!std::isfinite(arg)) return arg > 0.0 ? 0.0 : 1.0;
  return q_function(arg);
}

// Piecewise-linear kernel W(z) that approximates conditional_error:
// 1 below the window, 0 above, slope -beta/sqrt(2 pi) through (theta, 1/2).
inline double linearized_kernel(double z, const CodeParams& c) {
  if (z <= c.z_lo) return 1.0;
  if (z >= c.z_hi) return 0.0;
  return 0.5 - (c.beta / kSqrt2Pi) * (z - c.theta);
}

namespace detail {

// SINR value beyond which conditional_error underflows to zero.
inline double error_cutoff(const CodeParams& c) {
  return std::exp2(c.rate + 64.0 / std::sqrt(static_cast<double>(c.n))) - 1.0;
}

inline double clamp_probability(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace detail

// Expected block error over the SINR law, by adaptive quadrature.  The
// integral is taken in u = z^{2/alpha}, which removes the z^{2/alpha-1}
// endpoint singularity of the density; in the pure-noise case the density is
// already smooth and the integral is taken in z directly.
inline OutageEstimate outage_exact(const SinrParams& p, const CodeParams& c,
                                   double abs_tol = 1e-10, double rel_tol = 1e-8) {
  if (is_degenerate(p)) return {0.0, Method::exact_quadrature, 0.0, false};
  // integrate up to where either factor of the integrand has died off
  const double z_cut = detail::error_cutoff(c);
  QuadratureResult q;
  if (p.lambda == 0.0) {
    auto f = [&](double z) { return conditional_error(z, c) * p.xi * std::exp(-p.xi * z); };
    q = integrate_adaptive(f, 0.0, std::min(z_cut, 40.0 / p.xi), abs_tol, rel_tol);
  } else {
    const double s = p.alpha / 2.0;
    const double zl = p.zeta * p.lambda;
    auto f = [&](double u) {
      const double z = std::pow(u, s);
      const double slope = zl + p.xi * s * std::pow(u, s - 1.0);
      return conditional_error(z, c) * slope * std::exp(-(zl * u + p.xi * z));
    };
    q = integrate_adaptive(f, 0.0, std::min(std::pow(z_cut, 1.0 / s), 40.0 / zl), abs_tol, rel_tol);
  }
  return {detail::clamp_probability(q.value), Method::exact_quadrature, q.error_estimate, false};
}

// Linearized outage: the survival terms of the window edges in closed form
// plus one remaining quadrature of (beta z / sqrt(2 pi)) f_Z(z) over the
// clamped window.
inline OutageEstimate outage_linearized(const SinrParams& p, const CodeParams& c,
                                        double abs_tol = 1e-10, double rel_tol = 1e-8) {
  if (is_degenerate(p)) return {0.0, Method::linearized, 0.0, c.clamps()};
  const double r = c.z_lo_clamped();
  const double t = c.z_hi;
  const double f_t = sinr_cdf(p, t);
  const double f_r = r > 0.0 ? sinr_cdf(p, r) : 0.0;
  const double slope = c.beta / kSqrt2Pi;
  auto zf = [&](double z) { return z > 0.0 ? z * sinr_pdf(p, z) : 0.0; };
  const QuadratureResult q = integrate_adaptive(zf, r, t, abs_tol, rel_tol);
  const double value =
      0.5 * (f_t + f_r) + slope * c.theta * (f_t - f_r) - slope * q.value;
  return {detail::clamp_probability(value), Method::linearized, slope * q.error_estimate,
          c.clamps()};
}

// Interference-limited closed form (xi = 0, any alpha > 2):
//   eps = beta (z_hi - z_lo+) / sqrt(2 pi)
//         - C [gamma_low(a/2, u_hi) - gamma_low(a/2, u_lo)]
// with u = zeta lambda z^{2/alpha} and C = alpha beta / (2 sqrt(2pi) (zeta
// lambda)^{alpha/2}).  Equivalent to the upper-incomplete-gamma form, but the
// lower gamma keeps full precision when zeta lambda is small.
inline OutageEstimate outage_closed_ss(const SinrParams& p, const CodeParams& c) {
  if (p.xi != 0.0)
    throw ScenarioError("outage_closed_ss: requires an interference-limited scenario (xi = 0)");
  if (!(p.lambda > 0.0))
    throw ScenarioError("outage_closed_ss: requires lambda > 0");
  const double s = p.alpha / 2.0;
  const double zl = p.zeta * p.lambda;
  const double r = c.z_lo_clamped();
  const double t = c.z_hi;
  const double u_t = zl * std::pow(t, 1.0 / s);
  const double u_r = r > 0.0 ? zl * std::pow(r, 1.0 / s) : 0.0;
  const double first = c.beta * (t - r) / kSqrt2Pi;
  const double coeff = p.alpha * c.beta / (2.0 * kSqrt2Pi * std::pow(zl, s));
  const double g_t = gamma_lower(s, u_t);
  const double g_r = gamma_lower(s, u_r);
  const double value = first - coeff * (g_t - g_r);
  const double err = 8.0 * std::numeric_limits<double>::epsilon() * (first + coeff * (g_t + g_r));
  return {detail::clamp_probability(value), Method::closed_ss, err, c.clamps()};
}

namespace detail {

// gamma_lower(2, u) = 1 - (1+u) e^{-u}, by series for small u.
inline double gamma_lower_two(double u) {
  if (u >= 0.5) return 1.0 - (1.0 + u) * std::exp(-u);
  double sum = 0.0, sign_pow = -u;  // tracks (-u)^k; term_k = (-u)^k (k-1)/k!, k >= 2
  double factorial = 1.0;
  for (int k = 2; k < 40; ++k) {
    sign_pow *= -u;
    factorial *= k;
    const double term = sign_pow * (k - 1) / factorial;
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

}  // namespace detail

// Dense-urban specialization alpha = 4 of the interference-limited form;
// the gamma terms collapse to (1 + zl sqrt(z)) e^{-zl sqrt(z)}.
inline OutageEstimate outage_closed_ss_alpha4(const SinrParams& p, const CodeParams& c) {
  if (p.alpha != 4.0)
    throw ScenarioError("outage_closed_ss_alpha4: requires alpha = 4");
  if (p.xi != 0.0)
    throw ScenarioError("outage_closed_ss_alpha4: requires xi = 0");
  if (!(p.lambda > 0.0))
    throw ScenarioError("outage_closed_ss_alpha4: requires lambda > 0");
  const double zl = p.zeta * p.lambda;
  const double r = c.z_lo_clamped();
  const double t = c.z_hi;
  const double u_t = zl * std::sqrt(t);
  const double u_r = r > 0.0 ? zl * std::sqrt(r) : 0.0;
  const double first = c.beta * (t - r) / kSqrt2Pi;
  const double coeff = 2.0 * c.beta / (kSqrt2Pi * zl * zl);
  const double g_t = detail::gamma_lower_two(u_t);
  const double g_r = detail::gamma_lower_two(u_r);
  const double value = first - coeff * (g_t - g_r);
  const double err = 8.0 * std::numeric_limits<double>::epsilon() * (first + coeff * (g_t + g_r));
  return {detail::clamp_probability(value), Method::closed_ss_alpha4, err, c.clamps()};
}

// Micro-operator closed form (alpha = 4, xi > 0, lambda >= 0):
//   eps = (beta/sqrt(2 pi)) [ (z_hi - z_lo+) - J ],
//   J   = int S(z) dz over the window
//       = (S(lo) - S(hi))/xi
//         - (zl sqrt(pi) / (2 xi^{3/2})) (S(lo) erfcx(a) - S(hi) erfcx(b)),
// with S(z) = exp(-zl sqrt z - xi z), a,b = zl/(2 sqrt xi) + sqrt(xi z).
// The erfcx form keeps every factor in [0,1]-ish range; the textbook
// exp(zl^2/4xi) erf difference overflows for dense fields.
inline OutageEstimate outage_closed_micro_op(const SinrParams& p, const CodeParams& c) {
  if (p.alpha != 4.0)
    throw ScenarioError("outage_closed_micro_op: requires alpha = 4");
  if (!(p.xi > 0.0))
    throw ScenarioError("outage_closed_micro_op: requires xi > 0");
  const double zl = p.zeta * p.lambda;
  const double xi = p.xi;
  const double r = c.z_lo_clamped();
  const double t = c.z_hi;
  auto survival = [&](double z) { return std::exp(-(zl * std::sqrt(z) + xi * z)); };
  const double s_r = survival(r);
  const double s_t = survival(t);
  const double c2 = zl / (2.0 * std::sqrt(xi));
  const double a = c2 + std::sqrt(xi * r);
  const double b = c2 + std::sqrt(xi * t);
  double j = (s_r - s_t) / xi;
  if (zl > 0.0)
    j -= (zl * kSqrtPi / (2.0 * std::pow(xi, 1.5))) * (s_r * erfcx(a) - s_t * erfcx(b));
  const double value = (c.beta / kSqrt2Pi) * ((t - r) - j);
  const double err =
      8.0 * std::numeric_limits<double>::epsilon() * (c.beta / kSqrt2Pi) * ((t - r) + j);
  return {detail::clamp_probability(value), Method::closed_micro_op, err, c.clamps()};
}

// Relative deviation |exact - approx| / exact.
inline double approximation_error(const OutageEstimate& exact, const OutageEstimate& approx) {
  if (!(exact.value > 0.0))
    throw std::domain_error("approximation_error: undefined for exact outage = 0");
  return std::fabs((exact.value - approx.value) / exact.value);
}

// Cheapest applicable method: closed form when its scenario preconditions
// hold, otherwise the linearized evaluation.
inline OutageEstimate outage_auto(const SinrParams& p, const CodeParams& c) {
  if (!is_degenerate(p)) {
    if (p.xi == 0.0 && p.lambda > 0.0)
      return p.alpha == 4.0 ? outage_closed_ss_alpha4(p, c) : outage_closed_ss(p, c);
    if (p.alpha == 4.0 && p.xi > 0.0) return outage_closed_micro_op(p, c);
  }
  return outage_linearized(p, c);
}

inline OutageEstimate outage_by_method(Method m, const SinrParams& p, const CodeParams& c) {
  switch (m) {
    case Method::exact_quadrature: return outage_exact(p, c);
    case Method::linearized: return outage_linearized(p, c);
    case Method::closed_ss: return outage_closed_ss(p, c);
    case Method::closed_ss_alpha4: return outage_closed_ss_alpha4(p, c);
    case Method::closed_micro_op: return outage_closed_micro_op(p, c);
    case Method::monte_carlo:
      throw std::invalid_argument("outage_by_method: Monte Carlo needs sampling settings");
  }
  throw std::invalid_argument("outage_by_method: unknown method");
}

}  // namespace fblpp
