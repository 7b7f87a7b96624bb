#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fblpp/special.hpp"

namespace fblpp {

// SINR law of a reference link at distance d inside a Poisson field of
// Rayleigh-faded interferers with density lambda:
//   P[Z <= z] = 1 - exp(-zeta lambda z^{2/alpha} - xi z),
// with zeta = kappa pi d^2 (w_p/w_s)^{2/alpha}, xi = eta d^alpha / w_s and
// kappa = Gamma(1 + 2/alpha) Gamma(1 - 2/alpha).
struct SinrParams {
  double alpha = 4.0;   // path-loss exponent, > 2
  double lambda = 0.0;  // interferer density, nodes per m^2
  double d = 1.0;       // reference-link distance, m
  double w_p = 1.0;     // interferer transmit power, W
  double w_s = 1.0;     // reference transmit power, W
  double eta = 0.0;     // noise power, W
  // derived
  double kappa = 0.0;
  double zeta = 0.0;
  double xi = 0.0;
};

struct SinrSample {
  double z = 0.0;  // linear-scale SINR, >= 0
};

inline SinrParams derive_params(double alpha, double lambda, double d,
                                double w_p, double w_s, double eta) {
  if (!(alpha > 2.0) || !std::isfinite(alpha))
    throw std::domain_error("derive_params: path-loss exponent must exceed 2");
  if (!(d > 0.0) || !(w_p > 0.0) || !(w_s > 0.0))
    throw std::domain_error("derive_params: d and powers must be positive");
  if (!(lambda >= 0.0) || !(eta >= 0.0))
    throw std::domain_error("derive_params: lambda and eta must be nonnegative");
  SinrParams p;
  p.alpha = alpha;
  p.lambda = lambda;
  p.d = d;
  p.w_p = w_p;
  p.w_s = w_s;
  p.eta = eta;
  p.kappa = std::tgamma(1.0 + 2.0 / alpha) * std::tgamma(1.0 - 2.0 / alpha);
  p.zeta = p.kappa * std::numbers::pi * d * d * std::pow(w_p / w_s, 2.0 / alpha);
  p.xi = eta * std::pow(d, alpha) / w_s;
  return p;
}

// lambda = 0 and eta = 0: no interference and no noise, SINR degenerate at
// infinity. The CDF is identically zero and outage is zero downstream.
inline bool is_degenerate(const SinrParams& p) { return p.lambda == 0.0 && p.xi == 0.0; }

// Exponent G(z) = zeta lambda z^{2/alpha} + xi z of the survival function.
inline double sinr_exponent(const SinrParams& p, double z) {
  double g = 0.0;
  if (p.lambda > 0.0) g += p.zeta * p.lambda * std::pow(z, 2.0 / p.alpha);
  if (p.xi > 0.0) g += p.xi * z;
  return g;
}

// Survival function P[Z > z] = exp(-G(z)); exact in the far tail where the
// CDF saturates at 1.
inline double sinr_sf(const SinrParams& p, double z) {
  if (!(z >= 0.0)) throw std::domain_error("sinr_sf: requires z >= 0");
  if (is_degenerate(p)) return 1.0;
  return std::exp(-sinr_exponent(p, z));
}

inline double sinr_cdf(const SinrParams& p, double z) {
  if (!(z >= 0.0)) throw std::domain_error("sinr_cdf: requires z >= 0");
  if (is_degenerate(p)) return 0.0;
  return -std::expm1(-sinr_exponent(p, z));
}

// Density (2 zeta lambda / alpha) z^{2/alpha - 1} + xi, damped by the
// survival function.  The z^{2/alpha-1} factor diverges (integrably) at 0.
inline double sinr_pdf(const SinrParams& p, double z) {
  if (!(z > 0.0)) throw std::domain_error("sinr_pdf: requires z > 0");
  if (is_degenerate(p)) return 0.0;
  double slope = p.xi;
  if (p.lambda > 0.0)
    slope += (2.0 * p.lambda * p.zeta / p.alpha) * std::pow(z, 2.0 / p.alpha - 1.0);
  return slope * std::exp(-sinr_exponent(p, z));
}

// Inverse CDF by solving G(z) = -log(1-u).  Closed form when only one term
// is active, monotone bisection otherwise.
inline SinrSample sinr_quantile(const SinrParams& p, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("sinr_quantile: requires 0 < u < 1");
  if (is_degenerate(p))
    throw std::domain_error("sinr_quantile: degenerate SINR law (lambda = 0, xi = 0)");
  const double g = -std::log1p(-u);
  const double zl = p.zeta * p.lambda;
  if (p.xi == 0.0) return {std::pow(g / zl, p.alpha / 2.0)};
  if (zl == 0.0) return {g / p.xi};
  // each single-term inverse overshoots, so the smaller one brackets above
  double hi = std::min(std::pow(g / zl, p.alpha / 2.0), g / p.xi);
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sinr_exponent(p, mid) < g ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi)};
}

}  // namespace fblpp
