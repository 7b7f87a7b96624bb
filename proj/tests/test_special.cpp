#include <gtest/gtest.h>

#include <cmath>

#include "fblpp/special.hpp"
#include "oracles.hpp"

using namespace fblpp;

TEST(QFunction, CenterAndTails) {
  EXPECT_DOUBLE_EQ(q_function(0.0), 0.5);
  // deep tail underflows and is clamped
  EXPECT_LE(q_function(40.0), 1e-300);
  EXPECT_EQ(q_function(40.0), 0.0);
  EXPECT_NEAR(q_function(-40.0), 1.0, 1e-15);
}

TEST(QFunction, OracleValue) {
  // series oracle, evaluated here, plus its frozen result
  const double oracle = oracles::q_series(1.0);
  EXPECT_NEAR(oracle, 0.15865525393145705, 1e-15);
  EXPECT_NEAR(q_function(1.0), 0.15865525393145705, 1e-14);
  EXPECT_NEAR(q_function(1.0), oracle, 1e-14);
}

TEST(QFunction, SymmetryAndMonotonicity) {
  double prev = 1.1;
  for (int i = -80; i <= 80; ++i) {
    const double t = 0.1 * i;
    EXPECT_NEAR(q_function(t) + q_function(-t), 1.0, 1e-12);
    const double v = q_function(t);
    EXPECT_LE(v, prev);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
    prev = v;
  }
}

TEST(QFunction, RejectsNonFinite) {
  EXPECT_THROW(q_function(std::nan("")), std::domain_error);
  EXPECT_THROW(q_function(INFINITY), std::domain_error);
}

TEST(Erf, ValuesAndSymmetry) {
  EXPECT_DOUBLE_EQ(fblpp::erf(0.0), 0.0);
  const double oracle = oracles::erf_series(1.0);
  EXPECT_NEAR(oracle, 0.84270079294971489, 1e-15);
  EXPECT_NEAR(fblpp::erf(1.0), oracle, 1e-15);
  EXPECT_DOUBLE_EQ(fblpp::erf(-0.37), -fblpp::erf(0.37));
  EXPECT_THROW(fblpp::erf(std::nan("")), std::domain_error);
}

TEST(Erfcx, MatchesDirectProductAndAsymptotics) {
  for (double x : {0.0, 0.3, 1.0, 4.0, 10.0, 20.0, 25.9}) {
    EXPECT_NEAR(erfcx(x), std::exp(x * x) * std::erfc(x), 1e-13 * erfcx(x)) << "x=" << x;
  }
  // both sides of the series switch at x = 26, against the continued fraction
  for (double x : {2.0, 25.9999999, 26.0000001, 40.0, 100.0}) {
    const double ref = oracles::erfcx_cf(x);
    EXPECT_NEAR(erfcx(x), ref, 1e-12 * ref) << "x=" << x;
  }
  EXPECT_THROW(erfcx(-0.1), std::domain_error);
}

TEST(GammaUpper, ClosedFormCases) {
  EXPECT_NEAR(gamma_upper(2.0, 0.0), 1.0, 1e-15);  // Gamma(2) = 1
  EXPECT_NEAR(gamma_upper(1.0, 0.5), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(gamma_upper(1.0, 0.5), 0.60653065971263342, 1e-14);
}

TEST(GammaUpper, QuadratureOracle) {
  // int_x^inf u e^-u du = (1+x) e^-x; also cross-check with Simpson
  const double closed = 2.3 * std::exp(-1.3);
  EXPECT_NEAR(closed, 0.62682312397822892, 1e-15);
  const double simpson =
      oracles::simpson([](double u) { return u * std::exp(-u); }, 1.3, 60.0, 100000);
  EXPECT_NEAR(simpson, closed, 1e-12);
  EXPECT_NEAR(gamma_upper(2.0, 1.3), closed, 1e-14);
}

TEST(GammaUpper, DomainErrors) {
  EXPECT_THROW(gamma_upper(0.0, 1.0), std::domain_error);
  EXPECT_THROW(gamma_upper(-1.5, 1.0), std::domain_error);
  EXPECT_THROW(gamma_upper(2.0, -0.1), std::domain_error);
}

TEST(GammaUpper, DecreasingAndRecurrence) {
  for (double s : {0.7, 1.0, 1.5, 2.0, 2.5}) {
    double prev = gamma_upper(s, 0.0);
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double v = gamma_upper(s, x);
      EXPECT_LT(v, prev) << "s=" << s << " x=" << x;
      prev = v;
      // Gamma(s+1, x) = s Gamma(s, x) + x^s e^-x
      const double lhs = gamma_upper(s + 1.0, x);
      const double rhs = s * gamma_upper(s, x) + std::pow(x, s) * std::exp(-x);
      EXPECT_NEAR(lhs, rhs, 1e-10 * std::fabs(rhs));
    }
  }
}

TEST(GammaLower, ComplementsUpper) {
  for (double s : {0.7, 1.25, 2.0, 3.5}) {
    for (double x : {1e-8, 0.1, 1.0, 3.0, 12.0}) {
      EXPECT_NEAR(gamma_lower(s, x) + gamma_upper(s, x), std::tgamma(s),
                  1e-12 * std::tgamma(s));
    }
  }
  EXPECT_EQ(gamma_lower(2.0, 0.0), 0.0);
  // tiny-argument relative accuracy: gamma(2, x) = x^2/2 - x^3/3 + x^4/8 - ...
  const double x = 1e-8;
  const double series = x * x / 2.0 - x * x * x / 3.0 + x * x * x * x / 8.0;
  EXPECT_NEAR(gamma_lower(2.0, x), series, 1e-12 * series);
}

TEST(Numerics, BitIdenticalRepeatability) {
  EXPECT_EQ(q_function(1.234), q_function(1.234));
  EXPECT_EQ(gamma_upper(1.7, 2.9), gamma_upper(1.7, 2.9));
  EXPECT_EQ(erfcx(3.21), erfcx(3.21));
}
