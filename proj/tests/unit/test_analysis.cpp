#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "grw/analysis.hpp"

using namespace grw;

TEST(Eoc, SecondOrderSequence) {
  const std::vector<double> e = {1e-2, 2.5e-3, 6.25e-4};
  const auto r = eoc(e);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0], 2.0, 1e-12);
  EXPECT_NEAR(r[1], 2.0, 1e-12);
}

TEST(Eoc, InvariantUnderScaling) {
  const std::vector<double> e = {3e-2, 9e-3, 2e-3, 7e-4};
  std::vector<double> s = e;
  for (auto& x : s) x *= 123.0;
  const auto a = eoc(e), b = eoc(s);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  const std::vector<double> bad = {1e-2, 0.0};
  EXPECT_THROW(eoc(bad), DomainError);
}

TEST(OrderEstimates, LinearSequence) {
  std::vector<double> a;
  for (int s = 0; s < 200; ++s) a.push_back(std::pow(0.8, s));
  EXPECT_NEAR(comp_order_q(a), 1.0, 1e-9);
  EXPECT_NEAR(comp_order_qq(a), 0.8, 1e-9);
}

TEST(OrderEstimates, QuadraticSequence) {
  std::vector<double> a = {0.5};
  for (int s = 0; s < 5; ++s) a.push_back(a.back() * a.back());
  const auto q = q_sequence(a);
  for (double x : q) EXPECT_NEAR(x, 2.0, 1e-9);
}

TEST(OrderEstimates, SublinearPowerLaw) {
  std::vector<double> a;
  for (int s = 1; s <= 5000; ++s) a.push_back(3.0 / s);
  EXPECT_NEAR(loglog_decay_slope(a), -1.0, 1e-9);
  // Q tends to 1 and Q1 to 1 from below: no linear rate.
  EXPECT_NEAR(comp_order_q(a), 1.0, 1e-2);
  EXPECT_NEAR(comp_order_qq(a), 1.0, 1e-3);
  EXPECT_THROW(comp_order_q(std::vector<double>{1.0, 0.5}), ContractViolation);
}

TEST(OrderEstimates, MedianAndTailWindow) {
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));
  EXPECT_EQ(tail_start(100, TailWindow{0.25, 10}), 75u);
  EXPECT_EQ(tail_start(20, TailWindow{0.25, 10}), 10u);
  EXPECT_EQ(tail_start(5, TailWindow{0.25, 10}), 0u);
  const std::vector<double> x = {0, 1, 2, 3}, y = {1, 3, 5, 7};
  EXPECT_NEAR(least_squares_slope(x, y), 2.0, 1e-14);
}

TEST(Moments, GaussianPlumeOnLattice) {
  const Grid g = Grid::plane(301, 301, 0.02, 0.02);
  const double sx = 0.2, sz = 0.3, cx = 3.0, cz = 2.9;
  std::vector<double> c(g.size());
  for (std::size_t j = 0; j < g.nz; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double dx = g.x(i) - cx, dz = g.z(j) - cz;
      c[g.index(i, j)] = std::exp(-dx * dx / (2 * sx * sx) - dz * dz / (2 * sz * sz));
    }
  const Moments m = spatial_moments(g, c);
  EXPECT_NEAR(m.mean_x, cx, 1e-10);
  EXPECT_NEAR(m.mean_z, cz, 1e-10);
  EXPECT_NEAR(m.var_x, sx * sx, 1e-8);
  EXPECT_NEAR(m.var_z, sz * sz, 1e-8);
  EXPECT_LT(boundary_mass_fraction(g, c), 1e-10);
}

TEST(Moments, DiffusionFromGrowingVariance) {
  const Grid g = Grid::plane(401, 401, 0.01, 0.01);
  const double D = 1e-3;
  std::vector<Snapshot> snaps;
  for (double t : {1.0, 2.0, 3.0}) {
    std::vector<double> c(g.size());
    const double v = 2 * D * t;
    for (std::size_t j = 0; j < g.nz; ++j)
      for (std::size_t i = 0; i < g.nx; ++i) {
        const double dx = g.x(i) - 2.0, dz = g.z(j) - 2.0;
        c[g.index(i, j)] = std::exp(-(dx * dx + dz * dz) / (2 * v));
      }
    snaps.push_back({t, c});
  }
  const DiffusionEstimate e = moment_diffusion(g, snaps, D);
  EXPECT_NEAR(e.d_x / D, 1.0, 1e-6);
  EXPECT_NEAR(e.d_z / D, 1.0, 1e-6);
  EXPECT_LT(e.eps_dx, 1e-6);
  EXPECT_TRUE(e.valid);
}

TEST(Moments, EnsembleDispersionAddsCentreSpread) {
  // Two point plumes moving apart: each has zero own variance, so the
  // ensemble moment equals the squared offset from the common centre.
  const Grid g = Grid::plane(101, 3, 0.1, 1.0);
  auto plume = [&](std::size_t i) {
    std::vector<double> c(g.size(), 0.0);
    c[g.index(i, 1)] = 1.0;
    return c;
  };
  std::vector<std::vector<Snapshot>> ens(2);
  for (std::size_t k = 0; k < 3; ++k) {
    ens[0].push_back({static_cast<double>(k), plume(50 - 5 * k)});
    ens[1].push_back({static_cast<double>(k), plume(50 + 5 * k)});
  }
  const DispersionSeries d = ensemble_dispersion(g, ens);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(d.s_x[k], 0.25 * k * k, 1e-12);
  EXPECT_NEAR(d.d_x[2], 0.5 * (1.0 - 0.25), 1e-12);
  std::vector<std::vector<Snapshot>> bad = ens;
  bad[1].pop_back();
  EXPECT_THROW(ensemble_dispersion(g, bad), ContractViolation);
}

TEST(MonteCarlo, PointwiseAndSpatialStatistics) {
  const std::vector<std::vector<double>> ens = {{1.0, 2.0}, {3.0, 6.0}};
  const McStats st = mc_stats(ens);
  EXPECT_DOUBLE_EQ(st.mean[0], 2.0);
  EXPECT_DOUBLE_EQ(st.mean[1], 4.0);
  EXPECT_DOUBLE_EQ(st.variance[0], 2.0);
  EXPECT_DOUBLE_EQ(st.variance[1], 8.0);
  EXPECT_DOUBLE_EQ(st.spatial_mean, 3.0);
  EXPECT_DOUBLE_EQ(st.spatial_mean_std, 1.0);
  EXPECT_DOUBLE_EQ(st.spatial_variance, 5.0);
  EXPECT_DOUBLE_EQ(st.spatial_variance_std, 3.0);
}
