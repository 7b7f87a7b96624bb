#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fblpp/spatial_mc.hpp"
#include "oracles.hpp"

using namespace fblpp;

namespace {
const SinrParams kDsa = derive_params(4.0, 1e-2, 1.0, 1.0, 1.0, 0.0);
const CodeParams kCode = code_params_from_rate(200, 0.1);
}  // namespace

TEST(RecommendedRadius, TruncationPolicy) {
  // (1 + 1/frac)^{1/(alpha-2)}
  EXPECT_NEAR(recommended_radius(kDsa, 1e-3), std::sqrt(1001.0), 1e-9);
  const SinrParams a3 = derive_params(3.0, 1e-4, 1.0, 1.0, 1.0, 1e-3);
  EXPECT_NEAR(recommended_radius(a3, 1e-3), 1001.0, 1e-6);
  EXPECT_THROW(recommended_radius(kDsa, 0.0), std::domain_error);
}

TEST(RealizeField, PureNoiseIsRayleighFading) {
  // lambda = 0: Z = h0^2, unit-mean exponential
  const SinrParams p = derive_params(4.0, 0.0, 1.0, 1.0, 1.0, 1.0);
  FieldConfig cfg{0.0, 20000, SeedSpec{101, 0}, p, 1e-3};
  const EmpiricalDistribution dist = generate_field_samples(cfg, 1);
  EXPECT_LT(ks_statistic(dist, p), ks_critical_value(dist.count()));
}

TEST(RealizeField, DeterministicGivenSeed) {
  FieldConfig cfg{0.0, 5000, SeedSpec{7, 3}, kDsa, 1e-3};
  RandomStream s1({7, 3}), s2({7, 3});
  EXPECT_EQ(realize_field(cfg, s1).z, realize_field(cfg, s2).z);
  const EmpiricalDistribution a = generate_field_samples(cfg, 1);
  const EmpiricalDistribution b = generate_field_samples(cfg, 1);
  EXPECT_EQ(a.samples, b.samples);
}

TEST(RealizeField, WorkerCountInvariance) {
  FieldConfig cfg{0.0, 30000, SeedSpec{8, 0}, kDsa, 1e-3};
  const EmpiricalDistribution one = generate_field_samples(cfg, 1);
  const EmpiricalDistribution three = generate_field_samples(cfg, 3);
  EXPECT_EQ(one.samples, three.samples);
}

TEST(RealizeField, DegenerateConfigRejected) {
  const SinrParams p = derive_params(4.0, 0.0, 1.0, 1.0, 1.0, 0.0);
  FieldConfig cfg{0.0, 10, SeedSpec{1, 0}, p, 1e-3};
  RandomStream s({1, 0});
  EXPECT_THROW(realize_field(cfg, s), std::domain_error);
}

TEST(RealizeField, HarmonicMeanOracle) {
  // E[1/(1+Z)] against quadrature of the analytic law (Simpson, u-substituted)
  FieldConfig cfg{0.0, 1000000, SeedSpec{2024, 0}, kDsa, 1e-3};
  const EmpiricalDistribution dist = generate_field_samples(cfg, 0);
  double mean = 0.0, var = 0.0;
  for (double z : dist.samples) mean += 1.0 / (1.0 + z);
  mean /= static_cast<double>(dist.count());
  for (double z : dist.samples) {
    const double d = 1.0 / (1.0 + z) - mean;
    var += d * d;
  }
  var /= static_cast<double>(dist.count() - 1);
  const double se = std::sqrt(var / static_cast<double>(dist.count()));

  const double zl = kDsa.zeta * kDsa.lambda;
  auto integrand = [&](double u) {
    const double z = u * u;  // u = sqrt(z), f(z) dz = zl e^{-zl u} du
    return 1.0 / (1.0 + z) * zl * std::exp(-zl * u);
  };
  const double oracle = oracles::simpson(integrand, 0.0, 2000.0, 400000);
  EXPECT_NEAR(mean, oracle, 3.0 * se) << "oracle=" << oracle << " se=" << se;
}

TEST(EmpiricalCdf, OrderStatistics) {
  EmpiricalDistribution d;
  d.samples = {1.0, 2.0, 3.0, 4.0, 5.0};
  EXPECT_EQ(empirical_cdf(d, 0.5), 0.0);
  EXPECT_EQ(empirical_cdf(d, 3.0), 0.6);  // (count+1)/2 / count at the median
  EXPECT_EQ(empirical_cdf(d, 99.0), 1.0);
  EXPECT_THROW(empirical_cdf(EmpiricalDistribution{}, 1.0), std::domain_error);
}

TEST(EmpiricalCdf, MatchesAnalyticAtUnitSinr) {
  FieldConfig cfg{0.0, 100000, SeedSpec{31, 0}, kDsa, 1e-4};
  const EmpiricalDistribution dist = generate_field_samples(cfg, 0);
  EXPECT_NEAR(empirical_cdf(dist, 1.0), 0.048150192630726556, 1e-3);
}

TEST(EmpiricalOutage, KernelDegenerateCases) {
  EmpiricalDistribution at_theta;
  at_theta.samples.assign(64, kCode.theta);
  const OutageEstimate est = empirical_outage(at_theta, kCode);
  EXPECT_EQ(est.value, 0.5);
  EXPECT_EQ(est.error_bound, 0.0);
  EXPECT_EQ(est.method, Method::monte_carlo);

  EmpiricalDistribution huge;
  huge.samples.assign(64, 1e12);
  EXPECT_NEAR(empirical_outage(huge, kCode).value, 0.0, 1e-12);
}

TEST(EmpiricalOutage, AgreesWithQuadrature) {
  FieldConfig cfg{0.0, 200000, SeedSpec{77, 0}, kDsa, 1e-3};
  const EmpiricalDistribution dist = generate_field_samples(cfg, 0);
  const OutageEstimate mc = empirical_outage(dist, kCode);
  const OutageEstimate exact = outage_exact(kDsa, kCode);
  EXPECT_NEAR(mc.value, exact.value, 2.0 * mc.error_bound);
}

TEST(EmpiricalOutage, CrossChecksQuadratureAtScale) {
  // stronger interferers, a million realizations, two standard errors
  const SinrParams p = derive_params(4.0, 1e-2, 1.0, 1.4, 1.0, 0.0);
  FieldConfig cfg{0.0, 1000000, SeedSpec{12, 0}, p, 1e-3};
  const OutageEstimate mc = empirical_outage(generate_field_samples(cfg, 0), kCode);
  const OutageEstimate exact = outage_exact(p, kCode);
  EXPECT_NEAR(mc.value, exact.value, mc.error_bound);  // error_bound is 2 se
}

TEST(EmpiricalOutage, TwoSamplingRoutesAgree) {
  const SinrParams p = derive_params(4.0, 1e-3, 1.0, 1.0, 1.0, 1e-3);
  FieldConfig cfg{0.0, 100000, SeedSpec{5150, 0}, p, 1e-3};
  const OutageEstimate field = empirical_outage(generate_field_samples(cfg, 0), kCode);
  const OutageEstimate quant =
      empirical_outage(generate_quantile_samples(p, 100000, SeedSpec{5151, 0}, 0), kCode);
  EXPECT_NEAR(field.value, quant.value, 2.0 * (field.error_bound + quant.error_bound));
}

TEST(KsStatistic, SameLawDrawsPass) {
  const EmpiricalDistribution dist = generate_quantile_samples(kDsa, 100000, SeedSpec{42, 0}, 0);
  EXPECT_LT(ks_statistic(dist, kDsa), 1.36 / std::sqrt(1e5));
}

TEST(KsStatistic, FieldSamplesValidateTheLaw) {
  FieldConfig cfg{ks_grade_radius(kDsa, 1e-3), 100000, SeedSpec{43, 0}, kDsa, 1e-3};
  const EmpiricalDistribution dist = generate_field_samples(cfg, 0);
  EXPECT_LT(ks_statistic(dist, kDsa), 1.36 / std::sqrt(1e5));
  // negative control: doubled density must be rejected
  const SinrParams doubled = derive_params(4.0, 2e-2, 1.0, 1.0, 1.0, 0.0);
  EXPECT_GT(ks_statistic(dist, doubled), 1.36 / std::sqrt(1e5));
}

TEST(KsStatistic, RequiresSamples) {
  EmpiricalDistribution tiny;
  tiny.samples = {1.0, 2.0};
  EXPECT_THROW(ks_statistic(tiny, kDsa), std::domain_error);
}

TEST(KsCriticalValue, ConventionalLevel) {
  EXPECT_NEAR(ks_critical_value(100000, 0.05), 1.36 / std::sqrt(1e5), 2e-5);
}

TEST(Truncation, DoublingRadiusIsWithinStatisticalResolution) {
  // different radii decorrelate the streams, so the difference carries the
  // noise of two independent estimates; compare against the combined bounds
  FieldConfig base{0.0, 50000, SeedSpec{60, 0}, kDsa, 1e-3};
  const OutageEstimate a = empirical_outage(generate_field_samples(base, 0), kCode);
  FieldConfig wide = base;
  wide.radius = 2.0 * recommended_radius(kDsa, 1e-3);
  const OutageEstimate b = empirical_outage(generate_field_samples(wide, 0), kCode);
  EXPECT_NEAR(a.value, b.value, a.error_bound + b.error_bound);
}

TEST(Truncation, KsGradeRadiusBoundsTheBias) {
  // the bias bound shrinks with the radius and the solver meets its budget
  const double r0 = recommended_radius(kDsa, 1e-3);
  EXPECT_GT(truncation_sf_bias(kDsa, r0), truncation_sf_bias(kDsa, 4.0 * r0));
  const double r_ks = ks_grade_radius(kDsa, 1e-3);
  EXPECT_LE(truncation_sf_bias(kDsa, r_ks), 1e-3);
  // sparse fields need wider discs for distribution-level agreement
  const SinrParams sparse = derive_params(4.0, 1e-3, 1.0, 1.0, 1.0, 0.0);
  EXPECT_GT(ks_grade_radius(sparse, 1e-3), ks_grade_radius(kDsa, 1e-3));
  EXPECT_EQ(truncation_sf_bias(derive_params(4.0, 0.0, 1.0, 1.0, 1.0, 1.0), 10.0), 0.0);
}

TEST(DumpSamples, OneValuePerLine) {
  EmpiricalDistribution d;
  d.samples = {0.5, 1.25, 3.75};
  std::ostringstream os;
  dump_samples(d, os);
  std::istringstream is(os.str());
  double v;
  int lines = 0;
  while (is >> v) {
    EXPECT_EQ(v, d.samples[lines]);
    ++lines;
  }
  EXPECT_EQ(lines, 3);
}
