#pragma once

// Verification statistics: EOC, computational orders of iterative
// convergence, moment-based diffusion estimates, ensemble dispersion and
// Monte Carlo summaries.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "grw/errors.hpp"
#include "grw/flow.hpp"
#include "grw/lattice.hpp"

namespace grw {

inline std::vector<double> eoc(std::span<const double> errors) {
  require(errors.size() >= 2, "eoc: need at least two levels");
  std::vector<double> out;
  for (std::size_t l = 0; l + 1 < errors.size(); ++l) {
    if (!(errors[l] > 0.0 && errors[l + 1] > 0.0)) throw DomainError("eoc: errors must be positive");
    out.push_back(std::log(errors[l] / errors[l + 1]) / std::log(2.0));
  }
  return out;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + lo);
  }
  return m;
}

struct TailWindow {
  double fraction{0.25};
  std::size_t min_points{10};
};

// First index of the tail window over a sequence of n estimates.
inline std::size_t tail_start(std::size_t n, const TailWindow& w) {
  std::size_t len = std::max<std::size_t>(w.min_points, static_cast<std::size_t>(std::ceil(w.fraction * n)));
  len = std::min(len, n);
  return n - len;
}

// Per-index estimates Q_s = log(a_{s+1}/a_s) / log(a_s/a_{s-1}).
inline std::vector<double> q_sequence(std::span<const double> a) {
  std::vector<double> out;
  for (std::size_t s = 2; s < a.size(); ++s) {
    const double num = std::log(a[s] / a[s - 1]);
    const double den = std::log(a[s - 1] / a[s - 2]);
    const double q = num / den;
    if (std::isfinite(q)) out.push_back(q);
  }
  return out;
}

inline double comp_order_q(std::span<const double> history, TailWindow w = {}) {
  if (history.size() < 4) throw ContractViolation("comp_order_q: history too short");
  const std::vector<double> q = q_sequence(history);
  if (q.empty()) return std::numeric_limits<double>::quiet_NaN();
  return median(std::vector<double>(q.begin() + static_cast<std::ptrdiff_t>(tail_start(q.size(), w)), q.end()));
}

// Semicomputational order: limit of a_{s+1} / a_s^q.
inline double comp_order_qq(std::span<const double> history, double q = 1.0, TailWindow w = {}) {
  if (history.size() < 2) throw ContractViolation("comp_order_qq: history too short");
  std::vector<double> r;
  for (std::size_t s = 1; s < history.size(); ++s) {
    const double v = history[s] / std::pow(history[s - 1], q);
    if (std::isfinite(v)) r.push_back(v);
  }
  if (r.empty()) return std::numeric_limits<double>::quiet_NaN();
  return median(std::vector<double>(r.begin() + static_cast<std::ptrdiff_t>(tail_start(r.size(), w)), r.end()));
}

inline double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "least_squares_slope: need two matching points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw DomainError("least_squares_slope: degenerate abscissae");
  return sxy / sxx;
}

// Slope of log a_s against log s (s counted from 1) over the tail window.
inline double loglog_decay_slope(std::span<const double> history, TailWindow w = {}) {
  std::vector<double> x, y;
  for (std::size_t s = tail_start(history.size(), w); s < history.size(); ++s)
    if (history[s] > 0.0) {
      x.push_back(std::log(static_cast<double>(s + 1)));
      y.push_back(std::log(history[s]));
    }
  return least_squares_slope(x, y);
}

// ---------------------------------------------------------------------------
// Spatial moments and diffusion estimates
// ---------------------------------------------------------------------------

struct Moments {
  double mass{0.0};
  double mean_x{0.0}, mean_z{0.0};
  double var_x{0.0}, var_z{0.0};
};

inline Moments spatial_moments(const Grid& g, std::span<const double> c) {
  require(c.size() == g.size(), "spatial_moments: size mismatch");
  Moments m;
  for (std::size_t j = 0; j < g.nz; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double w = c[g.index(i, j)];
      m.mass += w;
      m.mean_x += w * g.x(i);
      m.mean_z += w * g.z(j);
    }
  if (m.mass == 0.0) throw DomainError("spatial_moments: zero mass");
  m.mean_x /= m.mass;
  m.mean_z /= m.mass;
  for (std::size_t j = 0; j < g.nz; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double w = c[g.index(i, j)];
      m.var_x += w * (g.x(i) - m.mean_x) * (g.x(i) - m.mean_x);
      m.var_z += w * (g.z(j) - m.mean_z) * (g.z(j) - m.mean_z);
    }
  m.var_x /= m.mass;
  m.var_z /= m.mass;
  return m;
}

// Fraction of mass sitting on boundary sites.
inline double boundary_mass_fraction(const Grid& g, std::span<const double> c) {
  double total = 0.0, edge = 0.0;
  for (std::size_t j = 0; j < g.nz; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double w = std::abs(c[g.index(i, j)]);
      total += w;
      if (on_boundary(g, i, j)) edge += w;
    }
  return total > 0.0 ? edge / total : 0.0;
}

struct DiffusionEstimate {
  double d_x{0.0}, d_z{0.0};      // least-squares slope of variance, halved
  double eps_dx{0.0}, eps_dz{0.0};  // time-averaged relative errors of per-snapshot estimates
  bool valid{true};                 // false if the plume reached the boundary
};

// Snapshots must start at the reference time t0 (first entry).
inline DiffusionEstimate moment_diffusion(const Grid& g, const std::vector<Snapshot>& snaps, double d_true,
                                          double boundary_tol = 1e-12) {
  require(snaps.size() >= 2, "moment_diffusion: need two snapshots");
  require(d_true > 0.0, "moment_diffusion: reference diffusion must be positive");
  std::vector<double> t, vx, vz;
  DiffusionEstimate est;
  for (const auto& s : snaps) {
    const Moments m = spatial_moments(g, s.values);
    t.push_back(s.t);
    vx.push_back(m.var_x);
    vz.push_back(m.var_z);
    if (boundary_mass_fraction(g, s.values) > boundary_tol) est.valid = false;
  }
  const bool has_x = g.nx > 1, has_z = g.nz > 1;
  est.d_x = has_x ? 0.5 * least_squares_slope(t, vx) : 0.0;
  est.d_z = has_z ? 0.5 * least_squares_slope(t, vz) : 0.0;
  double ex = 0.0, ez = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double dt = t[k] - t[0];
    ex += std::abs((vx[k] - vx[0]) / (2.0 * dt) - d_true) / d_true;
    ez += std::abs((vz[k] - vz[0]) / (2.0 * dt) - d_true) / d_true;
  }
  est.eps_dx = has_x ? ex / static_cast<double>(t.size() - 1) : 0.0;
  est.eps_dz = has_z ? ez / static_cast<double>(t.size() - 1) : 0.0;
  return est;
}

struct DispersionSeries {
  std::vector<double> t;
  std::vector<double> s_x, s_z;  // ensemble-averaged centred second moments
  std::vector<double> d_x, d_z;  // half time derivative of s_x, s_z
};

// realizations[r][k] is the plume of realization r at output k; all share times.
inline DispersionSeries ensemble_dispersion(const Grid& g, const std::vector<std::vector<Snapshot>>& realizations) {
  require(!realizations.empty(), "ensemble_dispersion: empty ensemble");
  const std::size_t nt = realizations.front().size();
  require(nt >= 2, "ensemble_dispersion: need two output times");
  for (const auto& r : realizations) {
    if (r.size() != nt) throw ContractViolation("ensemble_dispersion: mismatched output times");
    for (std::size_t k = 0; k < nt; ++k)
      if (std::abs(r[k].t - realizations.front()[k].t) > 1e-12 * std::max(1.0, std::abs(r[k].t)))
        throw ContractViolation("ensemble_dispersion: mismatched output times");
  }
  DispersionSeries out;
  const double nr = static_cast<double>(realizations.size());
  for (std::size_t k = 0; k < nt; ++k) {
    std::vector<Moments> ms;
    double cx = 0.0, cz = 0.0;
    for (const auto& r : realizations) {
      ms.push_back(spatial_moments(g, r[k].values));
      cx += ms.back().mean_x;
      cz += ms.back().mean_z;
    }
    cx /= nr;
    cz /= nr;
    // Second moment about the ensemble centre = own variance + squared offset.
    double sx = 0.0, sz = 0.0;
    for (const auto& m : ms) {
      sx += m.var_x + (m.mean_x - cx) * (m.mean_x - cx);
      sz += m.var_z + (m.mean_z - cz) * (m.mean_z - cz);
    }
    out.t.push_back(realizations.front()[k].t);
    out.s_x.push_back(sx / nr);
    out.s_z.push_back(sz / nr);
  }
  out.d_x.resize(nt);
  out.d_z.resize(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const std::size_t a = k == 0 ? 0 : k - 1, b = k == 0 ? 1 : k;
    const double dt = out.t[b] - out.t[a];
    out.d_x[k] = 0.5 * (out.s_x[b] - out.s_x[a]) / dt;
    out.d_z[k] = 0.5 * (out.s_z[b] - out.s_z[a]) / dt;
  }
  return out;
}

struct McStats {
  std::vector<double> mean, variance;  // pointwise over realizations
  double spatial_mean{0.0}, spatial_mean_std{0.0};
  double spatial_variance{0.0}, spatial_variance_std{0.0};
};

inline McStats mc_stats(const std::vector<std::vector<double>>& ensemble) {
  require(ensemble.size() >= 2, "mc_stats: need two realizations");
  const std::size_t n = ensemble.front().size();
  for (const auto& e : ensemble) require(e.size() == n, "mc_stats: realization sizes differ");
  McStats st;
  st.mean.assign(n, 0.0);
  st.variance.assign(n, 0.0);
  const double nr = static_cast<double>(ensemble.size());
  for (const auto& e : ensemble)
    for (std::size_t s = 0; s < n; ++s) st.mean[s] += e[s];
  for (auto& m : st.mean) m /= nr;
  for (const auto& e : ensemble)
    for (std::size_t s = 0; s < n; ++s) st.variance[s] += (e[s] - st.mean[s]) * (e[s] - st.mean[s]);
  for (auto& v : st.variance) v /= (nr - 1.0);
  auto avg_std = [n](const std::vector<double>& v, double& avg, double& sd) {
    avg = 0.0;
    for (double x : v) avg += x;
    avg /= static_cast<double>(n);
    sd = 0.0;
    for (double x : v) sd += (x - avg) * (x - avg);
    sd = std::sqrt(sd / static_cast<double>(n));
  };
  avg_std(st.mean, st.spatial_mean, st.spatial_mean_std);
  avg_std(st.variance, st.spatial_variance, st.spatial_variance_std);
  return st;
}

}  // namespace grw
