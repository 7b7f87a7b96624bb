#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fblpp/outage.hpp"
#include "fblpp/quadrature.hpp"
#include "fblpp/sinr.hpp"
#include "oracles.hpp"

using namespace fblpp;

namespace {
const CodeParams kCode200 = code_params_from_rate(200, 0.1);
const CodeParams kCode500 = code_params_from_rate(500, 0.1);
const SinrParams kNoise = derive_params(4.0, 0.0, 1.0, 1.0, 1.0, 1.0);      // xi = 1
const SinrParams kDsa = derive_params(4.0, 1e-2, 1.0, 1.0, 1.0, 0.0);       // zeta lambda ~ 0.0493
const SinrParams kMicro = derive_params(4.0, 1e-4, 1.0, 1.0, 1.0, 1e-3);    // xi = 1e-3
}  // namespace

TEST(CodeParams, Proposition1Constants) {
  // direct evaluation of the defining formulas, plus frozen values
  const double theta = std::pow(2.0, 0.1) - 1.0;
  const double beta = std::sqrt(200.0 / (2.0 * std::numbers::pi)) / std::sqrt(std::pow(2.0, 0.2) - 1.0);
  EXPECT_NEAR(kCode200.theta, theta, 1e-12);
  EXPECT_NEAR(kCode200.beta, beta, 1e-12 * beta);
  EXPECT_NEAR(kCode200.theta, 0.0717734625362931, 1e-12);
  EXPECT_NEAR(kCode200.beta, 14.6309316549972, 1e-10);
  EXPECT_NEAR(kCode200.z_hi, 0.157435412634148, 1e-12);
  EXPECT_NEAR(kCode200.z_lo, -0.0138884875615620, 1e-12);
  EXPECT_TRUE(kCode200.clamps());
  EXPECT_EQ(kCode200.z_lo_clamped(), 0.0);
  EXPECT_FALSE(kCode500.clamps());
  EXPECT_GT(kCode500.z_lo, 0.0);
}

TEST(CodeParams, BitsForm) {
  const CodeParams c = code_params_from_bits(200, 20);
  EXPECT_DOUBLE_EQ(c.rate, 0.1);
  EXPECT_EQ(c.theta, kCode200.theta);
  EXPECT_EQ(c.beta, kCode200.beta);
  ASSERT_TRUE(c.k.has_value());
  EXPECT_EQ(*c.k, 20);
}

TEST(CodeParams, WindowWidthIdentity) {
  std::mt19937 gen(3);
  std::uniform_int_distribution<int> un(50, 2000);
  std::uniform_real_distribution<double> ur(0.01, 2.0);
  for (int i = 0; i < 100; ++i) {
    const CodeParams c = code_params_from_rate(un(gen), ur(gen));
    EXPECT_NEAR(c.z_hi - c.z_lo, kSqrt2Pi / c.beta, 1e-12);
  }
}

TEST(CodeParams, DomainErrors) {
  EXPECT_THROW(code_params_from_rate(0, 0.1), std::domain_error);
  EXPECT_THROW(code_params_from_rate(200, 0.0), std::domain_error);
  EXPECT_THROW(code_params_from_bits(200, 0), std::domain_error);
}

TEST(Dispersion, ValuesAndLimits) {
  EXPECT_EQ(channel_dispersion(0.0), 0.0);
  EXPECT_NEAR(channel_dispersion(1.0), 0.75 * kLog2E * kLog2E, 1e-15);
  EXPECT_NEAR(channel_dispersion(1.0), 1.5610267357542058, 1e-12);
  EXPECT_NEAR(channel_dispersion(1e9), kLog2E * kLog2E, 1e-8);
  double prev = -1.0;
  for (double z : {0.0, 0.01, 0.1, 1.0, 10.0, 1e4}) {
    EXPECT_GT(channel_dispersion(z), prev);
    prev = channel_dispersion(z);
  }
  EXPECT_THROW(channel_dispersion(-0.1), std::domain_error);
}

TEST(ConditionalError, ExactAtThetaAndBoundaries) {
  EXPECT_EQ(conditional_error(kCode200.theta, kCode200), 0.5);
  EXPECT_EQ(conditional_error(0.0, kCode200), 1.0);
  // large z drains to zero
  EXPECT_EQ(conditional_error(1e6, kCode200), 0.0);
}

TEST(ConditionalError, DirectArgumentOracle) {
  // Q of the directly evaluated argument at z = 0.2
  const double z = 0.2;
  const double arg = std::sqrt(200.0) * (std::log2(1.0 + z) - 0.1) / std::sqrt(channel_dispersion(z));
  EXPECT_NEAR(conditional_error(z, kCode200), q_function(arg), 1e-12);
  EXPECT_NEAR(conditional_error(z, kCode200), 0.0019190114377404957, 1e-12);
}

TEST(LinearizedKernel, RampGeometry) {
  EXPECT_DOUBLE_EQ(linearized_kernel(kCode200.theta, kCode200), 0.5);
  EXPECT_EQ(linearized_kernel(kCode200.z_hi, kCode200), 0.0);
  const double mid = 0.5 * (kCode200.theta + kCode200.z_hi);
  EXPECT_NEAR(linearized_kernel(mid, kCode200), 0.25, 1e-12);
  // below the window (needs a positive lower breakpoint)
  EXPECT_EQ(linearized_kernel(kCode500.z_lo, kCode500), 1.0);
  EXPECT_EQ(linearized_kernel(0.0, kCode500), 1.0);
  EXPECT_NEAR(linearized_kernel(kCode500.z_lo * (1 + 1e-9), kCode500), 1.0, 1e-6);
}

TEST(LinearizedKernel, DominanceBound) {
  for (const CodeParams& c : {kCode200, kCode500, code_params_from_rate(1000, 0.5)}) {
    for (int i = 0; i <= 400; ++i) {
      const double z = 1e-3 * std::pow(1e4 / 1e-3, i / 400.0);
      EXPECT_LE(std::fabs(linearized_kernel(z, c) - conditional_error(z, c)), 0.5)
          << "z=" << z << " n=" << c.n;
    }
    EXPECT_EQ(linearized_kernel(c.theta, c), conditional_error(c.theta, c));
  }
}

TEST(OutageExact, PureNoiseSimpsonOracle) {
  // independent route: fixed-grid Simpson against the exponential density
  const double oracle = oracles::simpson(
      [&](double z) { return conditional_error(z, kCode200) * std::exp(-z); }, 0.0, 50.0, 200000);
  EXPECT_NEAR(oracle, 0.073467938098, 1e-9);
  const OutageEstimate est = outage_exact(kNoise, kCode200);
  EXPECT_EQ(est.method, Method::exact_quadrature);
  EXPECT_NEAR(est.value, oracle, 1e-8);
  EXPECT_FALSE(est.clamped_rho);
}

TEST(OutageExact, DegenerateIsZero) {
  const SinrParams p = derive_params(4.0, 0.0, 1.0, 1.0, 1.0, 0.0);
  EXPECT_EQ(outage_exact(p, kCode200).value, 0.0);
}

TEST(OutageExact, Deterministic) {
  const OutageEstimate a = outage_exact(kDsa, kCode200);
  const OutageEstimate b = outage_exact(kDsa, kCode200);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error_bound, b.error_bound);
}

TEST(OutageLinearized, EqualsKernelIntegral) {
  // the closed F-terms + window quadrature must equal the one-shot
  // integral of W(z) f_Z(z) over the support
  for (const SinrParams& p : {kDsa, kMicro, kNoise}) {
    for (const CodeParams& c : {kCode200, kCode500}) {
      auto wf = [&](double z) { return z > 0.0 ? linearized_kernel(z, c) * sinr_pdf(p, z) : 0.0; };
      const double s = p.alpha / 2.0;
      double direct;
      if (p.lambda > 0.0) {  // integrate in u = z^{2/alpha} to tame the density
        auto g = [&](double u) {
          const double z = std::pow(u, s);
          return wf(z) * s * std::pow(u, s - 1.0);
        };
        direct = integrate_adaptive(g, 0.0, std::pow(c.z_hi, 1.0 / s), 1e-12, 1e-11).value;
      } else {
        direct = integrate_adaptive(wf, 0.0, c.z_hi, 1e-12, 1e-11).value;
      }
      const OutageEstimate est = outage_linearized(p, c);
      EXPECT_NEAR(est.value, direct, 1e-9) << "n=" << c.n;
      EXPECT_EQ(est.method, Method::linearized);
      EXPECT_EQ(est.clamped_rho, c.clamps());
    }
  }
}

TEST(OutageLinearized, AccuracyAgainstExact) {
  // paper-scale accuracy study configuration (n = 500)
  const OutageEstimate ex500 = outage_exact(kNoise, kCode500);
  const OutageEstimate lin500 = outage_linearized(kNoise, kCode500);
  EXPECT_LE(approximation_error(ex500, lin500), 0.04);

  // frozen measured values at the shorter block (regression, not a paper claim)
  const OutageEstimate ex200 = outage_exact(kNoise, kCode200);
  const OutageEstimate lin200 = outage_linearized(kNoise, kCode200);
  EXPECT_NEAR(approximation_error(ex200, lin200), 0.0651, 2e-4);

  const SinrParams p = derive_params(4.0, 1e-2, 1.0, 1.0, 1.0, 0.0);
  const OutageEstimate ex = outage_exact(p, kCode500);
  const OutageEstimate lin = outage_linearized(p, kCode500);
  EXPECT_NEAR(ex.value, 0.0132192002805, 1e-9);
  EXPECT_NEAR(approximation_error(ex, lin), 0.0335296, 5e-4);
  EXPECT_LE(approximation_error(ex, lin), 0.04);
}

TEST(OutageClosedSS, MatchesLinearizedAcrossGrid) {
  for (double alpha : {2.5, 3.0, 4.0, 5.0}) {
    for (double lam : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
      const SinrParams p = derive_params(alpha, lam, 1.0, 1.4, 1.0, 0.0);
      for (const CodeParams& c : {kCode200, kCode500}) {
        const OutageEstimate lin = outage_linearized(p, c, 1e-12, 1e-10);
        const OutageEstimate ss = outage_closed_ss(p, c);
        EXPECT_NEAR(ss.value, lin.value, 1e-6) << "alpha=" << alpha << " lam=" << lam;
        EXPECT_EQ(ss.method, Method::closed_ss);
      }
    }
  }
}

TEST(OutageClosedSS, VanishesWithDensity) {
  const SinrParams p = derive_params(4.0, 1e-12, 1.0, 1.0, 1.0, 0.0);
  EXPECT_LE(outage_closed_ss(p, kCode200).value, 1e-9);
  EXPECT_GE(outage_closed_ss(p, kCode200).value, 0.0);
}

TEST(OutageClosedSS, ScenarioEnforcement) {
  EXPECT_THROW(outage_closed_ss(kMicro, kCode200), ScenarioError);
  const SinrParams no_interference = derive_params(4.0, 0.0, 1.0, 1.0, 1.0, 0.0);
  EXPECT_THROW(outage_closed_ss(no_interference, kCode200), ScenarioError);
}

TEST(OutageClosedSSAlpha4, SpecializesGeneralForm) {
  for (double lam : {1e-3, 1e-2, 1.0}) {
    const SinrParams p = derive_params(4.0, lam, 1.0, 1.0, 1.0, 0.0);
    const OutageEstimate general = outage_closed_ss(p, kCode200);
    const OutageEstimate special = outage_closed_ss_alpha4(p, kCode200);
    EXPECT_NEAR(special.value, general.value, 1e-9);
    EXPECT_EQ(special.method, Method::closed_ss_alpha4);
  }
}

TEST(OutageClosedSSAlpha4, OracleAgreementAndEnforcement) {
  const SinrParams sparse = derive_params(4.0, 1e-3, 1.0, 1.0, 1.0, 0.0);
  EXPECT_NEAR(outage_closed_ss_alpha4(sparse, kCode200).value,
              outage_linearized(sparse, kCode200, 1e-12, 1e-10).value, 1e-6);
  const SinrParams dense = derive_params(4.0, 1.0, 1.0, 1.0, 1.0, 0.0);
  EXPECT_NEAR(outage_closed_ss_alpha4(dense, kCode200).value,
              outage_linearized(dense, kCode200, 1e-12, 1e-10).value, 1e-6);
  EXPECT_THROW(outage_closed_ss_alpha4(derive_params(3.0, 1e-2, 1.0, 1.0, 1.0, 0.0), kCode200),
               ScenarioError);
  EXPECT_THROW(outage_closed_ss_alpha4(kMicro, kCode200), ScenarioError);
}

TEST(OutageClosedMicroOp, MatchesLinearized) {
  // pure noise limit
  const SinrParams noise_small = derive_params(4.0, 0.0, 1.0, 1.0, 1.0, 1e-3);
  EXPECT_NEAR(outage_closed_micro_op(noise_small, kCode200).value,
              outage_linearized(noise_small, kCode200, 1e-12, 1e-10).value, 1e-6);
  // stated operating point, ultra-reliable region
  const OutageEstimate mo = outage_closed_micro_op(kMicro, kCode200);
  EXPECT_NEAR(mo.value, outage_linearized(kMicro, kCode200, 1e-12, 1e-10).value, 1e-6);
  EXPECT_LE(mo.value, 1e-3);
  // denser field
  const SinrParams dense = derive_params(4.0, 1e-2, 1.0, 1.0, 1.0, 1e-3);
  EXPECT_NEAR(outage_closed_micro_op(dense, kCode200).value,
              outage_linearized(dense, kCode200, 1e-12, 1e-10).value, 1e-6);
  // very dense: the erfcx evaluation must not overflow
  const SinrParams very_dense = derive_params(4.0, 1.0, 1.0, 1.0, 1.0, 1e-3);
  const OutageEstimate vd = outage_closed_micro_op(very_dense, kCode200);
  EXPECT_TRUE(std::isfinite(vd.value));
  EXPECT_NEAR(vd.value, outage_linearized(very_dense, kCode200, 1e-12, 1e-10).value, 1e-6);
}

TEST(OutageClosedMicroOp, ScenarioEnforcement) {
  EXPECT_THROW(outage_closed_micro_op(kDsa, kCode200), ScenarioError);
  EXPECT_THROW(outage_closed_micro_op(derive_params(3.0, 1e-4, 1.0, 1.0, 1.0, 1e-3), kCode200),
               ScenarioError);
}

TEST(ApproximationError, Arithmetic) {
  const OutageEstimate e{0.02, Method::exact_quadrature, 0, false};
  const OutageEstimate a{0.0208, Method::linearized, 0, false};
  EXPECT_NEAR(approximation_error(e, a), 0.04, 1e-12);
  EXPECT_EQ(approximation_error(e, e), 0.0);
  const OutageEstimate zero{0.0, Method::exact_quadrature, 0, false};
  EXPECT_THROW(approximation_error(zero, a), std::domain_error);
}

TEST(OutageAuto, PicksCheapestValidMethod) {
  EXPECT_EQ(outage_auto(kDsa, kCode200).method, Method::closed_ss_alpha4);
  EXPECT_EQ(outage_auto(derive_params(3.0, 1e-2, 1.0, 1.0, 1.0, 0.0), kCode200).method,
            Method::closed_ss);
  EXPECT_EQ(outage_auto(kMicro, kCode200).method, Method::closed_micro_op);
  EXPECT_EQ(outage_auto(derive_params(3.0, 1e-4, 1.0, 1.0, 1.0, 1e-3), kCode200).method,
            Method::linearized);
  EXPECT_EQ(outage_auto(derive_params(4.0, 0.0, 1.0, 1.0, 1.0, 0.0), kCode200).value, 0.0);
}

TEST(Outage, MonotonicitySmoke) {
  double prev = 0.0;
  for (double lam : {1e-4, 1e-3, 1e-2, 1e-1}) {
    const double eps = outage_exact(derive_params(4.0, lam, 1.0, 1.0, 1.0, 0.0), kCode200).value;
    EXPECT_GE(eps, prev - 1e-10);
    prev = eps;
  }
  prev = 0.0;
  for (double rate : {0.05, 0.1, 0.2, 0.5}) {
    const double eps = outage_exact(kDsa, code_params_from_rate(200, rate)).value;
    EXPECT_GE(eps, prev - 1e-10);
    prev = eps;
  }
}

TEST(Outage, EstimatesStayInUnitInterval) {
  for (double lam : {0.0, 1e-6, 1e-2, 10.0}) {
    for (double eta : {0.0, 1e-3, 5.0}) {
      const SinrParams p = derive_params(4.0, lam, 1.0, 1.4, 0.5, eta);
      for (const CodeParams& c : {kCode200, code_params_from_rate(100, 1.5)}) {
        const double v = outage_auto(p, c).value;
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        EXPECT_FALSE(std::isnan(v));
      }
    }
  }
}
