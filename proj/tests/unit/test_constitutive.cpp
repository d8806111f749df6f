#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "grw/constitutive.hpp"
#include "grw/errors.hpp"

using namespace grw;

namespace {

std::vector<double> heads(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(-std::exp(std::log(-hi) + (std::log(-lo) - std::log(-hi)) * (n - 1 - i) / (n - 1)));
  return out;
}

}  // namespace

TEST(ExponentialModel, ContinuousAtSaturation) {
  ExpModelParams p;
  EXPECT_NEAR(theta_exp(-1e-12, p), theta_exp(0.0, p), 1e-11);
  EXPECT_NEAR(k_exp_psi(-1e-12, p), k_exp_psi(0.0, p), 1e-16);
  EXPECT_DOUBLE_EQ(theta_exp(5.0, p), p.theta_sat);
}

TEST(ExponentialModel, MonotoneInHead) {
  ExpModelParams p;
  double th = -1.0, k = -1.0;
  for (double psi : heads(-2.0, -1e-6, 400)) {
    EXPECT_GT(theta_exp(psi, p), th);
    EXPECT_GT(k_exp_psi(psi, p), k);
    th = theta_exp(psi, p);
    k = k_exp_psi(psi, p);
  }
}

TEST(ExponentialModel, ConductivityOfContentMatchesHeadForm) {
  ExpModelParams p;
  for (double psi : heads(-5.0, -1e-4, 50))
    EXPECT_NEAR(k_exp(theta_exp(psi, p), p), k_exp_psi(psi, p), 1e-12 * p.k_sat);
  EXPECT_THROW(k_exp(p.theta_res - 0.01, p), DomainError);
  EXPECT_THROW(k_exp(p.theta_sat + 0.01, p), DomainError);
}

TEST(ExponentialModel, DerivativeMatchesDifferenceQuotient) {
  ExpModelParams p;
  for (double psi : heads(-3.0, -1e-3, 40)) {
    const double h = 1e-6 * std::abs(psi);
    const double fd = (theta_exp(psi + h, p) - theta_exp(psi - h, p)) / (2.0 * h);
    EXPECT_NEAR(dtheta_exp(psi, p), fd, 1e-6 * std::abs(fd) + 1e-12);
  }
}

TEST(VanGenuchten, RoundTripContentAndHead) {
  VgmParams p;
  for (double psi : heads(-1e4, -1e-2, 200)) {
    const double th = theta_vgm(psi, p);
    if (th <= p.theta_res + 1e-9 || th >= p.theta_sat - 1e-12) continue;
    EXPECT_NEAR(psi_vgm(th, p), psi, 1e-8 * std::abs(psi));
  }
}

TEST(VanGenuchten, InitialHeadOfInfiltrationColumn) {
  // theta 0.17 with alpha 0.01 1/cm, n 1.5 gives a head of about -24.87 m.
  VgmParams p{0.1, 0.45, 6e-4, 0.01, 1.5};
  EXPECT_NEAR(psi_vgm(0.17, p), -2486.6, 0.1);
}

TEST(VanGenuchten, InverseRejectsBoundsOfRange) {
  VgmParams p;
  EXPECT_THROW(psi_vgm(p.theta_res, p), DomainError);
  EXPECT_THROW(psi_vgm(p.theta_sat, p), DomainError);
}

TEST(VanGenuchten, ContinuityAndMonotonicity) {
  VgmParams p;
  EXPECT_NEAR(theta_vgm(-1e-10, p), p.theta_sat, 1e-9);
  EXPECT_NEAR(k_vgm(-1e-10, p), p.k_sat, 1e-6 * p.k_sat);
  double th = -1.0, k = -1.0;
  for (double psi : heads(-1e5, -1e-3, 500)) {
    EXPECT_GE(theta_vgm(psi, p), th);
    EXPECT_GE(k_vgm(psi, p), k);
    th = theta_vgm(psi, p);
    k = k_vgm(psi, p);
  }
  EXPECT_EQ(k_vgm_of_se(0.0, p), 0.0);
  EXPECT_EQ(k_vgm_of_se(1.0, p), p.k_sat);
}

TEST(VanGenuchten, DerivativesMatchDifferenceQuotients) {
  VgmParams p;
  for (double psi : heads(-2e3, -1.0, 40)) {
    const double h = 1e-6 * std::abs(psi);
    const double fd = (theta_vgm(psi + h, p) - theta_vgm(psi - h, p)) / (2.0 * h);
    EXPECT_NEAR(dtheta_vgm(psi, p), fd, 1e-5 * std::abs(fd));
  }
  for (double se = 0.05; se < 0.95; se += 0.1) {
    const double h = 1e-6;
    const double fd = (k_vgm_of_se(se + h, p) - k_vgm_of_se(se - h, p)) / (2.0 * h);
    EXPECT_NEAR(dk_dse_vgm(se, p), fd, 1e-5 * std::abs(fd));
  }
}

TEST(VanGenuchten, ValidateRejectsBadParameters) {
  VgmParams p;
  p.n = 1.0;
  EXPECT_THROW(p.validate(), ContractViolation);
  VgmParams q;
  q.theta_res = 0.5;
  EXPECT_THROW(q.validate(), ContractViolation);
}

TEST(Fujita, IncreasingAndBounded) {
  FujitaParams p;
  double prev = 0.0;
  for (double th = 0.0; th <= 1.0; th += 0.05) {
    const double d = fujita_diffusivity(th, p);
    EXPECT_GT(d, prev);
    prev = d;
  }
  EXPECT_DOUBLE_EQ(fujita_diffusivity(0.0, p), p.d0);
  FujitaParams bad{1.0, 0.999};
  EXPECT_THROW(fujita_diffusivity(1.5, bad), DomainError);
}

TEST(Surfactant, GammaIsOneWithoutSurfactantAndGrows) {
  SurfactantParams s;
  EXPECT_DOUBLE_EQ(gamma_surfactant(0.0, s), 1.0);
  EXPECT_GT(gamma_surfactant(1.0, s), 1.0);
  EXPECT_THROW(gamma_surfactant(-1.0, s), DomainError);
  EXPECT_DOUBLE_EQ(reaction_rate(0.0), 0.0);
  EXPECT_NEAR(reaction_rate(1.0, 2e-3), 1e-3, 1e-18);
  EXPECT_THROW(reaction_rate(-1.0), DomainError);
}

TEST(Laws, SurfactantLawScalesHead) {
  SurfactantLaw<ExponentialLaw> law;
  const double c = 0.7, psi = -0.3;
  const double g = gamma_surfactant(c, law.s);
  EXPECT_DOUBLE_EQ(law.theta(psi, c), theta_exp(g * psi, law.base.p));
  EXPECT_DOUBLE_EQ(law.conductivity(psi, c), k_exp_psi(g * psi, law.base.p));
  const double h = 1e-7;
  EXPECT_NEAR(law.dtheta(psi, c), (law.theta(psi + h, c) - law.theta(psi - h, c)) / (2 * h), 1e-6);
}

TEST(Laws, DegenerateLawSaturatedBranch) {
  DegenerateManufacturedLaw law;
  EXPECT_EQ(law.dtheta(0.5), 0.0);
  EXPECT_EQ(law.theta(0.5), DegenerateManufacturedLaw::kThetaSat);
  EXPECT_GT(law.dtheta(-0.5), 0.0);
}

TEST(Laws, RetentionSlopeDiagnostic) {
  ExpModelParams p;
  const double l = l_theta_diagnostic([&](double psi) { return dtheta_exp(psi, p); });
  EXPECT_NEAR(l, p.alpha * (p.theta_sat - p.theta_res), 1e-6);
}
