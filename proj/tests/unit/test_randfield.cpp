#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "grw/randfield.hpp"

using namespace grw;

namespace {

// Ensemble covariance of the log fluctuation at lag (rx, rz), averaged over
// independent realizations and several base points.
double ensemble_covariance(const RandomFieldSpec& spec, double rx, double rz, int realizations) {
  double acc = 0.0;
  int n = 0;
  for (int r = 0; r < realizations; ++r) {
    const KraichnanModes m = sample_modes(spec, static_cast<std::uint64_t>(r));
    for (int b = 0; b < 4; ++b) {
      const double x0 = 3.7 * b, z0 = -1.3 * b;
      acc += m.fluctuation(x0, z0) * m.fluctuation(x0 + rx, z0 + rz);
      ++n;
    }
  }
  return acc / n;
}

}  // namespace

class CorrelationOracle : public ::testing::TestWithParam<CorrelationModel> {};

TEST_P(CorrelationOracle, EnsembleCovarianceMatchesModel) {
  RandomFieldSpec spec;
  spec.variance = 0.5;
  spec.corr_len_x = 2.0;
  spec.corr_len_z = 2.0;
  spec.model = GetParam();
  spec.n_modes = 64;
  spec.seed = 99;
  const int realizations = 3000;
  for (double lag : {0.0, 1.0, 2.0, 4.0}) {
    const double r = lag / spec.corr_len_x;
    const double expect = spec.variance * (spec.model == CorrelationModel::Gaussian ? std::exp(-r * r) : std::exp(-r));
    const double got = ensemble_covariance(spec, lag / std::sqrt(2.0), lag / std::sqrt(2.0), realizations);
    // Standard error of the estimate is below 0.02 s2 at this ensemble size.
    EXPECT_NEAR(got, expect, 0.06 * spec.variance) << "lag " << lag;
  }
}

INSTANTIATE_TEST_SUITE_P(Models, CorrelationOracle,
                         ::testing::Values(CorrelationModel::Gaussian, CorrelationModel::Exponential));

TEST(RandomField, AnisotropicLengthsScaleTheLag) {
  RandomFieldSpec spec;
  spec.variance = 1.0;
  spec.corr_len_x = 4.0;
  spec.corr_len_z = 1.0;
  spec.n_modes = 64;
  const double cx = ensemble_covariance(spec, 4.0, 0.0, 2000);
  const double cz = ensemble_covariance(spec, 0.0, 1.0, 2000);
  EXPECT_NEAR(cx, std::exp(-1.0), 0.08);
  EXPECT_NEAR(cz, std::exp(-1.0), 0.08);
}

TEST(RandomField, LogMeanConventions) {
  RandomFieldSpec a;
  a.mean = 3.0;
  a.variance = 0.4;
  EXPECT_NEAR(a.log_mean(), std::log(3.0) - 0.2, 1e-15);
  a.convention = LogMeanConvention::GeometricMean;
  EXPECT_NEAR(a.log_mean(), std::log(3.0), 1e-15);
}

TEST(RandomField, ArithmeticMeanOfLognormalField) {
  RandomFieldSpec spec;
  spec.mean = 12e-4;
  spec.variance = 0.1;
  spec.corr_len_x = spec.corr_len_z = 1.0;
  spec.model = CorrelationModel::Exponential;
  const Grid g = Grid::plane(8, 8, 3.0, 3.0);
  double sum = 0.0;
  int n = 0;
  for (std::uint64_t k = 0; k < 400; ++k) {
    const Field f = kraichnan_lognormal(spec, g, k);
    for (double v : f.values) {
      sum += v;
      ++n;
    }
  }
  EXPECT_NEAR(sum / n / spec.mean, 1.0, 0.02);
}

TEST(RandomField, ReproducibleForSeedAndKey) {
  RandomFieldSpec spec;
  spec.variance = 1.0;
  spec.seed = 5;
  const Grid g = Grid::plane(6, 5, 0.5, 0.5);
  const Field a = kraichnan_log_field(spec, g, 3), b = kraichnan_log_field(spec, g, 3);
  const Field c = kraichnan_log_field(spec, g, 4);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
  spec.seed = 6;
  EXPECT_NE(kraichnan_log_field(spec, g, 3).values, a.values);
}

TEST(RandomField, ZeroVarianceIsConstant) {
  RandomFieldSpec spec;
  spec.mean = 2.0;
  const Field f = kraichnan_lognormal(spec, Grid::plane(4, 4, 1.0, 1.0));
  for (double v : f.values) EXPECT_DOUBLE_EQ(v, 2.0);
}

TEST(FirstOrderVelocity, DivergenceFreeWithMeanFlow) {
  RandomFieldSpec spec;
  spec.variance = 0.1;
  spec.model = CorrelationModel::Exponential;
  const FirstOrderVelocity v = make_firstorder_velocity(spec, 0.7, 1);
  for (double x : {0.1, 2.5, 7.0})
    for (double z : {-1.0, 0.3, 4.0}) {
      EXPECT_LE(std::abs(v.divergence(x, z)), 1e-12);
      const double h = 1e-5;
      const double fd = (v(x + h, z).first - v(x - h, z).first + v(x, z + h).second - v(x, z - h).second) / (2 * h);
      EXPECT_LE(std::abs(fd), 1e-7);
    }
  // Spatial average recovers the mean velocity.
  double su = 0.0;
  int n = 0;
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 60; ++j, ++n) su += v(0.5 * i, 0.5 * j).first;
  EXPECT_NEAR(su / n, 0.7, 0.05);
}

TEST(RandomField, SpecValidation) {
  RandomFieldSpec s;
  s.mean = -1.0;
  EXPECT_THROW(s.validate(), ContractViolation);
  RandomFieldSpec t;
  t.n_modes = 0;
  EXPECT_THROW(sample_modes(t), ContractViolation);
}
