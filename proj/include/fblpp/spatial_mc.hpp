#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fblpp/outage.hpp"
#include "fblpp/random.hpp"
#include "fblpp/sinr.hpp"

namespace fblpp {

// Spatial ground truth: Poisson interferer fields on a disc around the
// reference receiver, Rayleigh fading everywhere, reference transmitter as a
// deterministic extra node at distance d (it is not a point of the process).
struct FieldConfig {
  double radius = 0.0;       // simulation disc radius; <= 0 means auto
  long n_realizations = 0;
  SeedSpec seed;
  SinrParams physical;
  double tail_fraction = 1e-3;  // far-field truncation budget
};

// Disc radius such that the expected interference from beyond it is at most
// tail_fraction of the mean interference from the annulus [1, radius]
// (the unbounded path-loss law makes the full in-disc mean divergent, so the
// unit-distance annulus is the reference scale): radius = (1 + 1/frac)^{1/(a-2)}.
inline double recommended_radius(const SinrParams& p, double tail_fraction = 1e-3) {
  if (!(tail_fraction > 0.0)) throw std::domain_error("recommended_radius: fraction must be > 0");
  return std::pow(1.0 + 1.0 / tail_fraction, 1.0 / (p.alpha - 2.0));
}

// Truncating the field at `radius` scales the survival function up by
// exp(b z), b = 2 pi lambda (w_p/w_s) d^alpha radius^{2-alpha}/(alpha-2)
// (the dropped far-field part of the Laplace exponent).  Returns the worst
// CDF shift max_z S(z) (e^{bz} - 1); this is what a distribution-level test
// like Kolmogorov-Smirnov actually sees.
inline double truncation_sf_bias(const SinrParams& p, double radius) {
  if (p.lambda == 0.0) return 0.0;
  const double b = 2.0 * std::numbers::pi * p.lambda * (p.w_p / p.w_s) *
                   std::pow(p.d, p.alpha) * std::pow(radius, 2.0 - p.alpha) / (p.alpha - 2.0);
  const double z_lo = sinr_quantile(p, 1e-4).z;
  const double z_hi = sinr_quantile(p, 1.0 - 1e-9).z;
  double worst = 0.0;
  for (int i = 0; i <= 160; ++i) {
    const double z = z_lo * std::pow(z_hi / z_lo, i / 160.0);
    const double bz = std::min(b * z, 40.0);
    worst = std::max(worst, std::min(1.0, std::exp(-sinr_exponent(p, z)) * std::expm1(bz)));
  }
  return worst;
}

// Smallest disc (up to a sqrt-2 step) whose truncation bias on the CDF stays
// below bias_budget.  Unlike a fixed tail fraction, this adapts to the
// density: sparse fields have huge typical SINR and need wide discs for
// distribution-level agreement.
inline double ks_grade_radius(const SinrParams& p, double bias_budget) {
  if (!(bias_budget > 0.0)) throw std::domain_error("ks_grade_radius: budget must be > 0");
  double radius = recommended_radius(p, 1e-3);
  if (p.lambda == 0.0 || is_degenerate(p)) return radius;
  while (truncation_sf_bias(p, radius) > bias_budget && radius < 1e8)
    radius *= 1.4142135623730951;
  return radius;
}

namespace detail {

inline double path_gain(double r, double alpha) {
  if (alpha == 4.0) {
    const double r2 = r * r;
    return 1.0 / (r2 * r2);
  }
  return std::pow(r, -alpha);
}

}  // namespace detail

// One spatial realization: N ~ Poisson(lambda pi R^2) interferers placed
// uniformly on the disc, exponential power fades, SINR of the reference link.
inline SinrSample realize_field(const FieldConfig& cfg, RandomStream& stream) {
  const SinrParams& p = cfg.physical;
  if (is_degenerate(p))
    throw std::domain_error("realize_field: degenerate configuration (lambda = 0, eta = 0)");
  const double radius = cfg.radius > 0.0 ? cfg.radius : recommended_radius(p, cfg.tail_fraction);
  double interference = 0.0;
  if (p.lambda > 0.0) {
    const long n_nodes = stream.next_poisson(p.lambda * std::numbers::pi * radius * radius);
    for (long i = 0; i < n_nodes; ++i) {
      // 1-u is uniform on (0,1], so the distance is strictly positive
      const double r = radius * std::sqrt(1.0 - stream.next_uniform());
      const double fade = stream.next_exponential();
      interference += p.w_p * fade * detail::path_gain(r, p.alpha);
    }
  }
  const double h0 = stream.next_exponential();
  const double signal = p.w_s * h0 * detail::path_gain(p.d, p.alpha);
  return {signal / (interference + p.eta)};
}

struct EmpiricalDistribution {
  std::vector<double> samples;  // sorted ascending
  long count() const { return static_cast<long>(samples.size()); }
};

namespace detail {

// Realizations are partitioned into fixed-size chunks; chunk c always uses
// stream_id = base + c, so the output is invariant to the worker count.
inline constexpr long kChunkSize = 4096;

template <class DrawOne>
std::vector<double> generate_chunked(long n, SeedSpec seed, int n_threads, DrawOne draw) {
  if (n < 1) throw std::domain_error("generate: need at least one realization");
  std::vector<double> out(static_cast<size_t>(n));
  const long n_chunks = (n + kChunkSize - 1) / kChunkSize;
  if (n_threads <= 0)
    n_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n_threads = static_cast<int>(std::min<long>(n_threads, n_chunks));
  auto worker = [&](int w) {
    for (long chunk = w; chunk < n_chunks; chunk += n_threads) {
      RandomStream stream(SeedSpec{seed.master_seed, seed.stream_id + static_cast<std::uint64_t>(chunk)});
      const long begin = chunk * kChunkSize;
      const long end = std::min(n, begin + kChunkSize);
      for (long i = begin; i < end; ++i) out[static_cast<size_t>(i)] = draw(stream);
    }
  };
  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  return out;
}

}  // namespace detail

inline EmpiricalDistribution generate_field_samples(const FieldConfig& cfg, int n_threads = 0) {
  FieldConfig c = cfg;
  if (c.radius <= 0.0) c.radius = recommended_radius(c.physical, c.tail_fraction);
  auto draw = [&c](RandomStream& s) { return realize_field(c, s).z; };
  EmpiricalDistribution dist;
  dist.samples = detail::generate_chunked(cfg.n_realizations, cfg.seed, n_threads, draw);
  std::sort(dist.samples.begin(), dist.samples.end());
  return dist;
}

// Second, independent route to the same law: inverse-transform draws through
// the analytic quantile function.
inline EmpiricalDistribution generate_quantile_samples(const SinrParams& p, long n,
                                                       SeedSpec seed, int n_threads = 0) {
  auto draw = [&p](RandomStream& s) {
    double u = s.next_uniform();
    if (u <= 0.0) u = std::numeric_limits<double>::min();
    return sinr_quantile(p, u).z;
  };
  EmpiricalDistribution dist;
  dist.samples = detail::generate_chunked(n, seed, n_threads, draw);
  std::sort(dist.samples.begin(), dist.samples.end());
  return dist;
}

// Fraction of samples <= z.
inline double empirical_cdf(const EmpiricalDistribution& dist, double z) {
  if (dist.samples.empty()) throw std::domain_error("empirical_cdf: no samples");
  const auto it = std::upper_bound(dist.samples.begin(), dist.samples.end(), z);
  return static_cast<double>(it - dist.samples.begin()) / static_cast<double>(dist.samples.size());
}

// Sample mean of the conditional block-error kernel; error_bound is two
// standard errors.
inline OutageEstimate empirical_outage(const EmpiricalDistribution& dist, const CodeParams& c) {
  if (dist.samples.empty()) throw std::domain_error("empirical_outage: no samples");
  const double n = static_cast<double>(dist.samples.size());
  std::vector<double> errors(dist.samples.size());
  for (size_t i = 0; i < dist.samples.size(); ++i) errors[i] = conditional_error(dist.samples[i], c);
  double mean = 0.0;
  for (const double e : errors) mean += e;
  mean /= n;
  double var = 0.0;
  for (const double e : errors) var += (e - mean) * (e - mean);
  var = dist.samples.size() > 1 ? var / (n - 1.0) : 0.0;
  return {mean, Method::monte_carlo, 2.0 * std::sqrt(var / n), false};
}

// One-sample Kolmogorov-Smirnov statistic against the analytic SINR law.
inline double ks_statistic(const EmpiricalDistribution& dist, const SinrParams& p) {
  const long n = dist.count();
  if (n < 10) throw std::domain_error("ks_statistic: need at least 10 samples");
  double d_max = 0.0;
  for (long i = 0; i < n; ++i) {
    const double f = sinr_cdf(p, std::max(0.0, dist.samples[static_cast<size_t>(i)]));
    const double lo = f - static_cast<double>(i) / static_cast<double>(n);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
    d_max = std::max({d_max, lo, hi});
  }
  return d_max;
}

// Asymptotic critical value sqrt(-ln(alpha/2)/2) / sqrt(n); 1.36/sqrt(n) at
// the conventional 5% level.
inline double ks_critical_value(long n, double alpha = 0.05) {
  if (n < 1) throw std::domain_error("ks_critical_value: need samples");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("ks_critical_value: bad level");
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

// Raw-sample dump, one SINR value per line.
inline void dump_samples(const EmpiricalDistribution& dist, std::ostream& os) {
  char buf[40];
  for (const double z : dist.samples) {
    std::snprintf(buf, sizeof buf, "%.17g\n", z);
    os << buf;
  }
}

}  // namespace fblpp
