#pragma once

// Kraichnan spectral generators: log-normal scalar fields and first-order
// divergence-free velocity fluctuations.

#include <cmath>
#include <numbers>
#include <vector>

#include "grw/errors.hpp"
#include "grw/flow.hpp"
#include "grw/lattice.hpp"
#include "grw/rng.hpp"

namespace grw {

enum class CorrelationModel { Exponential, Gaussian };
enum class LogMeanConvention { ArithmeticMean, GeometricMean };

struct RandomFieldSpec {
  double mean{1.0};      // arithmetic (default) or geometric mean of the field
  double variance{0.0};  // variance of the log field
  double corr_len_x{1.0};
  double corr_len_z{1.0};
  CorrelationModel model{CorrelationModel::Gaussian};
  std::size_t n_modes{100};
  std::uint64_t seed{0};
  LogMeanConvention convention{LogMeanConvention::ArithmeticMean};

  void validate() const {
    require(mean > 0.0, "random field: mean must be positive");
    require(variance >= 0.0, "random field: variance must be nonnegative");
    require(corr_len_x > 0.0 && corr_len_z > 0.0, "random field: correlation lengths must be positive");
    require(n_modes >= 1, "random field: need at least one mode");
  }

  // Mean of the log field.
  double log_mean() const {
    return convention == LogMeanConvention::ArithmeticMean ? std::log(mean) - 0.5 * variance : std::log(mean);
  }
};

// Standard normal pair by Box-Muller on the counter stream.
class NormalStream {
 public:
  explicit NormalStream(CounterRng& rng) : rng_(rng) {}
  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = rng_.uniform();
    while (u1 <= 0.0) u1 = rng_.uniform();
    const double u2 = rng_.uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    spare_ = rad * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return rad * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  CounterRng& rng_;
  double spare_{0.0};
  bool has_spare_{false};
};

struct KraichnanModes {
  std::vector<double> kx, kz, phase;
  double amplitude{0.0};  // sigma * sqrt(2/N)
  double log_mean{0.0};

  // Zero-mean Gaussian fluctuation Y'(x, z).
  double fluctuation(double x, double z) const {
    double s = 0.0;
    for (std::size_t m = 0; m < kx.size(); ++m) s += std::cos(kx[m] * x + kz[m] * z + phase[m]);
    return amplitude * s;
  }
  double log_value(double x, double z) const { return log_mean + fluctuation(x, z); }
  double value(double x, double z) const { return std::exp(log_value(x, z)); }
};

// Wave vectors drawn from the spectral density of the chosen covariance:
//   Gaussian    C(r) = s2 exp(-r^2/l^2): each component ~ N(0, 2/l^2)
//   exponential C(r) = s2 exp(-r/l) in 2D: radial density k (1 + k^2)^(-3/2)
//   in units of 1/l, inverse CDF k = sqrt((1-U)^-2 - 1), uniform direction.
// Realization index `key` selects an independent stream for the same seed.
inline KraichnanModes sample_modes(const RandomFieldSpec& spec, std::uint64_t key = 0) {
  spec.validate();
  CounterRng rng(spec.seed, key);
  NormalStream normal(rng);
  KraichnanModes m;
  const std::size_t n = spec.n_modes;
  m.kx.resize(n);
  m.kz.resize(n);
  m.phase.resize(n);
  m.amplitude = std::sqrt(spec.variance) * std::sqrt(2.0 / static_cast<double>(n));
  m.log_mean = spec.log_mean();
  for (std::size_t j = 0; j < n; ++j) {
    double ux, uz;
    if (spec.model == CorrelationModel::Gaussian) {
      ux = std::numbers::sqrt2 * normal();
      uz = std::numbers::sqrt2 * normal();
    } else {
      double u = rng.uniform();
      const double k = std::sqrt(1.0 / ((1.0 - u) * (1.0 - u)) - 1.0);
      const double a = 2.0 * std::numbers::pi * rng.uniform();
      ux = k * std::cos(a);
      uz = k * std::sin(a);
    }
    m.kx[j] = ux / spec.corr_len_x;
    m.kz[j] = uz / spec.corr_len_z;
    m.phase[j] = 2.0 * std::numbers::pi * rng.uniform();
  }
  return m;
}

inline Field kraichnan_lognormal(const RandomFieldSpec& spec, const Grid& g, std::uint64_t key = 0) {
  const KraichnanModes m = sample_modes(spec, key);
  Field f(g);
  for (std::size_t j = 0; j < g.nz; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) f.at(i, j) = m.value(g.x(i), g.z(j));
  return f;
}

// Log field Y on the grid (no exponentiation).
inline Field kraichnan_log_field(const RandomFieldSpec& spec, const Grid& g, std::uint64_t key = 0) {
  const KraichnanModes m = sample_modes(spec, key);
  Field f(g);
  for (std::size_t j = 0; j < g.nz; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) f.at(i, j) = m.log_value(g.x(i), g.z(j));
  return f;
}

// First-order velocity for mean flow U along x over a log-normal
// conductivity: each mode contributes U a (e1 - k k1/|k|^2) cos(k.x + phi),
// orthogonal to its wave vector and therefore divergence free.
struct FirstOrderVelocity {
  KraichnanModes modes;
  double mean_u{0.0};

  std::pair<double, double> operator()(double x, double z) const {
    double ux = mean_u, uz = 0.0;
    for (std::size_t j = 0; j < modes.kx.size(); ++j) {
      const double k1 = modes.kx[j], k2 = modes.kz[j];
      const double kk = k1 * k1 + k2 * k2;
      if (kk == 0.0) continue;
      const double c = modes.amplitude * std::cos(k1 * x + k2 * z + modes.phase[j]);
      ux += mean_u * (1.0 - k1 * k1 / kk) * c;
      uz += mean_u * (-k1 * k2 / kk) * c;
    }
    return {ux, uz};
  }

  // Analytic divergence of the fluctuation; zero up to rounding.
  double divergence(double x, double z) const {
    double d = 0.0;
    for (std::size_t j = 0; j < modes.kx.size(); ++j) {
      const double k1 = modes.kx[j], k2 = modes.kz[j];
      const double kk = k1 * k1 + k2 * k2;
      if (kk == 0.0) continue;
      const double s = -modes.amplitude * std::sin(k1 * x + k2 * z + modes.phase[j]);
      d += mean_u * ((1.0 - k1 * k1 / kk) * k1 + (-k1 * k2 / kk) * k2) * s;
    }
    return d;
  }
};

inline FirstOrderVelocity make_firstorder_velocity(const RandomFieldSpec& spec, double mean_u, std::uint64_t key = 0) {
  return {sample_modes(spec, key), mean_u};
}

inline VelocityField kraichnan_velocity_firstorder(const RandomFieldSpec& spec, double mean_u, const Grid& g,
                                                   std::uint64_t key = 0) {
  const FirstOrderVelocity fv = make_firstorder_velocity(spec, mean_u, key);
  VelocityField out{g, std::vector<double>(g.size()), std::vector<double>(g.size())};
  for (std::size_t j = 0; j < g.nz; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const auto q = fv(g.x(i), g.z(j));
      out.u[g.index(i, j)] = q.first;
      out.v[g.index(i, j)] = q.second;
    }
  return out;
}

}  // namespace grw
