#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "grw/analysis.hpp"
#include "grw/rng.hpp"
#include "grw/transport.hpp"

using namespace grw;

namespace {

VelocityField random_velocity(const Grid& g, double amp, std::uint64_t seed) {
  CounterRng rng(seed);
  VelocityField v{g, std::vector<double>(g.size()), std::vector<double>(g.size())};
  for (std::size_t s = 0; s < g.size(); ++s) {
    v.u[s] = amp * (2.0 * rng.uniform() - 1.0);
    v.v[s] = amp * (2.0 * rng.uniform() - 1.0);
  }
  return v;
}

TransportProblem walled_problem(const Grid& g, std::vector<double> c0, double d) {
  TransportProblem p;
  p.grid = g;
  p.d1 = p.d2 = d;
  p.boundary = [](const BoundaryNode&, double) { return BoundaryCondition::no_flow(); };
  p.c0 = std::move(c0);
  return p;
}

}  // namespace

TEST(BiasedWalk, GatherEqualsSiteUpdate) {
  const Grid g = Grid::plane(9, 7, 1.0, 1.0);
  CounterRng rng(21);
  std::vector<double> c0(g.size());
  for (auto& c : c0) c = rng.uniform();
  const VelocityField vel = random_velocity(g, 1.5, 5);
  const double dt = 0.2;
  BgrwTransport tr(walled_problem(g, c0, 1.0));
  tr.decoupled_step(vel, dt);
  const BgrwParams bp = make_bgrw_params(1.0, 1.0, dt, g);
  const DriftNumbers d = drift_numbers(vel, dt, 1.0);
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < g.nz; ++j)
    for (std::size_t i = 1; i + 1 < g.nx; ++i) {
      const std::size_t s = g.index(i, j);
      const double ref = bgrw_site_update(c0[s], c0[s + 1], c0[s - 1], c0[s + g.nx], c0[s - g.nx], d.u[s + 1],
                                          d.u[s - 1], d.v[s + g.nx], d.v[s - g.nx], bp);
      worst = std::max(worst, std::abs(tr.concentration()[s] - ref));
    }
  EXPECT_LE(worst, 1e-14);
}

TEST(BiasedWalk, ConstraintsRejectHighPeclet) {
  const Grid g = Grid::plane(5, 5, 1.0, 1.0);
  VelocityField vel{g, std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 3.0)};
  BgrwTransport tr(walled_problem(g, std::vector<double>(g.size(), 1.0), 1.0));
  EXPECT_THROW(tr.decoupled_step(vel, 0.2), TimeStepError);
  EXPECT_TRUE(peclet_admissible(2.0, 1.0, 1.0));
  EXPECT_FALSE(peclet_admissible(2.1, 1.0, 1.0));
}

TEST(BiasedWalk, ParticleModesConserveMassExactly) {
  const Grid g = Grid::plane(8, 6, 1.0, 1.0);
  const double n_total = 1048576.0;  // 2^20: integer counts are exact in double
  CounterRng rng(8);
  std::vector<double> c0(g.size());
  for (auto& c : c0) c = std::floor(n_total * rng.uniform()) / n_total;
  const VelocityField vel = random_velocity(g, 1.0, 3);
  for (auto mode : {RedistributionMode::RemainderCarry, RedistributionMode::Binomial}) {
    TransportOptions opt;
    opt.mode = mode;
    opt.n_total = n_total;
    opt.seed = 17;
    BgrwTransport tr(walled_problem(g, c0, 1.0), opt);
    double before = 0.0;
    for (double n : tr.counts()) before += n;
    for (int k = 0; k < 30; ++k) tr.decoupled_step(vel, 0.2);
    double after = 0.0;
    for (double n : tr.counts()) {
      EXPECT_EQ(n, std::floor(n));
      EXPECT_GE(n, 0.0);
      after += n;
    }
    EXPECT_EQ(after, before) << to_string(mode);
  }
}

TEST(BiasedWalk, DeterministicModeConservesMassToRounding) {
  const Grid g = Grid::plane(8, 6, 1.0, 1.0);
  CounterRng rng(4);
  std::vector<double> c0(g.size());
  for (auto& c : c0) c = rng.uniform();
  const VelocityField vel = random_velocity(g, 1.0, 3);
  BgrwTransport tr(walled_problem(g, c0, 1.0));
  double before = 0.0;
  for (double c : c0) before += c;
  for (int k = 0; k < 30; ++k) tr.decoupled_step(vel, 0.2);
  double after = 0.0;
  for (double c : tr.concentration()) after += c;
  EXPECT_NEAR(after, before, 1e-13 * before);
}

TEST(UnbiasedWalk, ShiftAndAmplitudeChoice) {
  EXPECT_EQ(integer_shift(1.0, 2.4, 1.0), 2);
  EXPECT_EQ(integer_shift(1.0, -2.6, 1.0), -3);
  const Grid g = Grid::plane(10, 10, 0.1, 0.1);
  const int d = choose_jump_amplitude(0.01, 0.01, 1.0, g);
  const double r = 2.0 * 0.01 * 1.0 / (d * d * 0.01);
  EXPECT_LE(2.0 * r, 1.0 + 1e-12);
  const double r_prev = 2.0 * 0.01 * 1.0 / ((d - 1) * (d - 1) * 0.01);
  EXPECT_GT(2.0 * r_prev, 1.0);
}

TEST(UnbiasedWalk, FreeOfNumericalDiffusion) {
  // Constant velocity and diffusion: the variance grows by exactly 2 D dt per
  // step and the centre moves by the integer shift.
  const Grid g = Grid::plane(121, 121, 0.05, 0.05);
  const double D = 1e-3, U = 0.2, V = -0.1, dt = 0.5;
  VelocityField vel{g, std::vector<double>(g.size(), U), std::vector<double>(g.size(), V)};
  const int d = choose_jump_amplitude(D, D, dt, g);
  const UgrwParams up = make_ugrw_params(vel, D, D, dt, d);
  std::vector<double> n(g.size(), 0.0);
  n[g.index(40, 80)] = 1e24;
  std::vector<Snapshot> snaps{{0.0, n}};
  for (int k = 1; k <= 8; ++k) {
    n = ugrw_step(n, g, up);
    snaps.push_back({k * dt, n});
  }
  const DiffusionEstimate est = moment_diffusion(g, snaps, D);
  EXPECT_TRUE(est.valid);
  EXPECT_LE(est.eps_dx, 1e-10);
  EXPECT_LE(est.eps_dz, 1e-10);
  const Moments m0 = spatial_moments(g, snaps.front().values), m1 = spatial_moments(g, snaps.back().values);
  EXPECT_NEAR(m1.mass, m0.mass, 1e-12 * m0.mass);
  EXPECT_NEAR(m1.mean_x - m0.mean_x, 8 * up.u[0] * g.dx, 1e-12);
  EXPECT_NEAR(m1.mean_z - m0.mean_z, 8 * up.v[0] * g.dz, 1e-12);
}

TEST(UnbiasedWalk, RemainderModeConservesIntegerCounts) {
  const Grid g = Grid::plane(30, 30, 1.0, 1.0);
  VelocityField vel{g, std::vector<double>(g.size(), 1.0), std::vector<double>(g.size(), 0.0)};
  const UgrwParams up = make_ugrw_params(vel, 0.2, 0.2, 1.0, 1);
  Redistributor red(RedistributionMode::RemainderCarry, 5 * g.size());
  std::vector<double> n(g.size(), 0.0);
  n[g.index(10, 15)] = 100003.0;
  for (int k = 0; k < 10; ++k) n = ugrw_step(n, g, up, {}, &red);
  double total = 0.0;
  for (double x : n) {
    EXPECT_EQ(x, std::floor(x));
    total += x;
  }
  EXPECT_EQ(total, 100003.0);
}

TEST(UnbiasedWalk, DirichletSitesAbsorbLeavingGroups) {
  const Grid g = Grid::column(5, 1.0);
  VelocityField vel{g, std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 1.0)};
  const UgrwParams up = make_ugrw_params(vel, 0.0, 0.0, 1.0, 1);
  std::vector<double> n(g.size(), 0.0);
  n[4] = 7.0;
  std::vector<char> dir(g.size(), 0);
  EXPECT_EQ(ugrw_step(n, g, up)[4], 7.0);
  dir[4] = 1;
  EXPECT_EQ(ugrw_step(n, g, up, dir)[4], 0.0);
}
