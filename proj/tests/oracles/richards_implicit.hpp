#pragma once

// Independent reference for 1D Richards problems: mixed-form backward Euler
// finite volumes with Newton iterations on a vertex-centred column (z up).
// Boundary nodes own half cells. Face conductivities are arithmetic means.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace grw::oracle {

struct ColumnBc {
  enum class Kind { Dirichlet, Flux, NoFlow, FreeDrainage };
  Kind kind{Kind::NoFlow};
  std::function<double(double t)> value;  // head for Dirichlet, inward flux for Flux

  static ColumnBc dirichlet(std::function<double(double)> f) { return {Kind::Dirichlet, std::move(f)}; }
  static ColumnBc flux(std::function<double(double)> f) { return {Kind::Flux, std::move(f)}; }
  static ColumnBc no_flow() { return {Kind::NoFlow, {}}; }
  static ColumnBc free_drainage() { return {Kind::FreeDrainage, {}}; }
};

struct ColumnModel {
  std::size_t n{2};
  double dz{1.0};
  std::function<double(double psi, std::size_t j)> theta;
  std::function<double(double psi, std::size_t j)> conductivity;
  ColumnBc bottom, top;
};

class ImplicitColumn {
 public:
  ImplicitColumn(ColumnModel m, std::vector<double> psi0) : m_(std::move(m)), psi_(std::move(psi0)) {
    if (psi_.size() != m_.n || m_.n < 3) throw std::invalid_argument("oracle: bad column");
  }

  const std::vector<double>& psi() const { return psi_; }
  double time() const { return t_; }
  std::size_t newton_iterations() const { return newton_total_; }

  // Advances to t_target with steps no longer than dt_max; a step whose
  // Newton iteration stalls is retried with half the size.
  void advance(double t_target, double dt_max, double tol = 1e-11) {
    double dt = dt_max;
    while (t_ < t_target - 1e-12 * std::max(1.0, t_target)) {
      const double h = std::min(dt, t_target - t_);
      if (step(h, tol)) {
        t_ += h;
        dt = std::min(dt_max, dt * 1.5);
      } else {
        dt = 0.5 * h;
        if (dt < 1e-14 * std::max(1.0, t_target)) throw std::runtime_error("oracle: time step collapsed");
      }
    }
  }

  // Node fluxes: mean of the adjacent face fluxes q = -K (dpsi/dz + 1).
  std::vector<double> node_flux() const {
    const std::size_t n = m_.n;
    std::vector<double> face(n - 1), q(n);
    for (std::size_t j = 0; j + 1 < n; ++j) face[j] = -face_k(psi_, j) * ((psi_[j + 1] - psi_[j]) / m_.dz + 1.0);
    q[0] = face[0];
    q[n - 1] = face[n - 2];
    for (std::size_t j = 1; j + 1 < n; ++j) q[j] = 0.5 * (face[j - 1] + face[j]);
    return q;
  }

 private:
  double face_k(const std::vector<double>& p, std::size_t j) const {
    return 0.5 * (m_.conductivity(p[j], j) + m_.conductivity(p[j + 1], j + 1));
  }

  // Upward flux across face j+1/2 into node j+1 from node j, i.e. F = -q.
  double face_inflow_up(const std::vector<double>& p, std::size_t j) const {
    return face_k(p, j) * ((p[j + 1] - p[j]) / m_.dz + 1.0);
  }

  double residual(const std::vector<double>& p, const std::vector<double>& th_old, double dt, double t_new,
                  std::size_t j) const {
    const std::size_t n = m_.n;
    if (j == 0 && m_.bottom.kind == ColumnBc::Kind::Dirichlet) return p[0] - m_.bottom.value(t_new);
    if (j == n - 1 && m_.top.kind == ColumnBc::Kind::Dirichlet) return p[n - 1] - m_.top.value(t_new);
    const bool edge = j == 0 || j == n - 1;
    const double vol = edge ? 0.5 * m_.dz : m_.dz;
    // Net inflow into the control volume of node j.
    double inflow = 0.0;
    if (j + 1 < n) inflow += face_inflow_up(p, j);   // from above: F_{j+1/2} = K(dpsi/dz + 1)
    if (j > 0) inflow -= face_inflow_up(p, j - 1);   // to below
    if (j == n - 1) {
      if (m_.top.kind == ColumnBc::Kind::Flux) inflow += m_.top.value(t_new);
      if (m_.top.kind == ColumnBc::Kind::FreeDrainage) throw std::invalid_argument("oracle: free drainage at top");
    }
    if (j == 0) {
      if (m_.bottom.kind == ColumnBc::Kind::Flux) inflow += m_.bottom.value(t_new);
      if (m_.bottom.kind == ColumnBc::Kind::FreeDrainage) inflow -= m_.conductivity(p[0], 0);
    }
    return vol * (m_.theta(p[j], j) - th_old[j]) / dt - inflow;
  }

  bool step(double dt, double tol) {
    const std::size_t n = m_.n;
    const double t_new = t_ + dt;
    std::vector<double> th_old(n);
    for (std::size_t j = 0; j < n; ++j) th_old[j] = m_.theta(psi_[j], j);
    std::vector<double> p = psi_, r(n), a(n), b(n), c(n), dx(n);
    for (int it = 0; it < 60; ++it) {
      double rnorm = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        r[j] = residual(p, th_old, dt, t_new, j);
        rnorm = std::max(rnorm, std::abs(r[j]));
      }
      // Tridiagonal Jacobian by one-sided differences in each unknown.
      for (std::size_t k = 0; k < n; ++k) {
        const double h = 1e-7 * std::max(1.0, std::abs(p[k]));
        const double keep = p[k];
        p[k] = keep + h;
        for (std::size_t j = (k == 0 ? 0 : k - 1); j <= std::min(n - 1, k + 1); ++j) {
          const double d = (residual(p, th_old, dt, t_new, j) - r[j]) / h;
          if (j + 1 == k) c[j] = d;
          else if (j == k) b[j] = d;
          else a[j] = d;
        }
        p[k] = keep;
      }
      // Thomas algorithm for J dx = -r.
      std::vector<double> cp(n), dp(n);
      cp[0] = c[0] / b[0];
      dp[0] = -r[0] / b[0];
      for (std::size_t j = 1; j < n; ++j) {
        const double den = b[j] - a[j] * cp[j - 1];
        cp[j] = j + 1 < n ? c[j] / den : 0.0;
        dp[j] = (-r[j] - a[j] * dp[j - 1]) / den;
      }
      dx[n - 1] = dp[n - 1];
      for (std::size_t j = n - 1; j-- > 0;) dx[j] = dp[j] - cp[j] * dx[j + 1];
      double step_norm = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(dx[j])) return false;
        // Damp large head updates.
        const double lim = 0.5 * std::max(1.0, std::abs(p[j]));
        const double d = std::clamp(dx[j], -lim, lim);
        p[j] += d;
        step_norm = std::max(step_norm, std::abs(d));
      }
      ++newton_total_;
      if (step_norm <= tol * std::max(1.0, max_abs(p))) {
        psi_ = p;
        return true;
      }
    }
    return false;
  }

  static double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }

  ColumnModel m_;
  std::vector<double> psi_;
  double t_{0.0};
  std::size_t newton_total_{0};
};

// Steady column with constant downward flux q0 and bottom head psi_b:
// dpsi/dz = q0 / K(psi, z) - 1 integrated upwards by RK4 with `sub` substeps
// per node interval.
inline std::vector<double> steady_flux_profile(std::size_t n, double dz, double psi_b, double q0,
                                               const std::function<double(double psi, double z)>& k,
                                               int sub = 200) {
  std::vector<double> psi(n);
  psi[0] = psi_b;
  double y = psi_b;
  const double h = dz / sub;
  auto f = [&](double z, double p) { return q0 / k(p, z) - 1.0; };
  for (std::size_t j = 1; j < n; ++j) {
    const double z0 = (j - 1) * dz;
    for (int s = 0; s < sub; ++s) {
      // Interior stage points stay strictly inside the node interval, so a
      // material interface at a node is never straddled.
      const double z = z0 + s * h + 1e-12 * dz;
      const double k1 = f(z, y), k2 = f(z + 0.5 * h, y + 0.5 * h * k1), k3 = f(z + 0.5 * h, y + 0.5 * h * k2),
                   k4 = f(z + h - 2e-12 * dz, y + h * k3);
      y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    psi[j] = y;
  }
  return psi;
}

}  // namespace grw::oracle
