#pragma once

// Advection-diffusion-reaction walkers. The biased walk (BGRW) encodes
// advection as asymmetric nearest-neighbour jumps and admits an L-scheme
// source for coupling; the unbiased walk (UGRW) shifts whole groups by an
// integer displacement and spreads them with symmetric jumps of amplitude d.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "grw/errors.hpp"
#include "grw/flow.hpp"
#include "grw/lattice.hpp"

namespace grw {

using ReactionFn = std::function<double(double c)>;

struct TransportProblem {
  Grid grid;
  double d1{0.0};  // x diffusion
  double d2{0.0};  // z diffusion
  ReactionFn reaction;   // optional R(c)
  BoundaryFn boundary;   // Dirichlet concentration or no-flux; Flux is treated as an influx
  std::vector<double> c0;
  SourceFn source;       // optional manufactured source
  double t_end{1.0};
};

struct BgrwParams {
  double rx{0.0};
  double rz{0.0};
  double l_param{1.0};
};

inline BgrwParams make_bgrw_params(double d1, double d2, double dt, const Grid& g, double l_param = 1.0) {
  return {g.nx > 1 ? 2.0 * d1 * dt / (l_param * g.dx * g.dx) : 0.0,
          g.nz > 1 ? 2.0 * d2 * dt / (l_param * g.dz * g.dz) : 0.0, l_param};
}

// Per-site drift numbers u = dt U / (L dx), v = dt V / (L dz).
struct DriftNumbers {
  std::vector<double> u;
  std::vector<double> v;
};

inline DriftNumbers drift_numbers(const VelocityField& vel, double dt, double l_param) {
  DriftNumbers d{std::vector<double>(vel.u.size()), std::vector<double>(vel.v.size())};
  for (std::size_t s = 0; s < vel.u.size(); ++s) {
    d.u[s] = dt * vel.u[s] / (l_param * vel.grid.dx);
    d.v[s] = dt * vel.v[s] / (l_param * vel.grid.dz);
  }
  return d;
}

// Checks rx + rz <= 1 and |u| <= rx, |v| <= rz on every site that moves in
// that direction.
inline void check_bgrw(const BgrwParams& p, const DriftNumbers& d, const Grid& g) {
  const double tol = 1e-12;
  if (p.rx < 0.0 || p.rz < 0.0 || p.rx + p.rz > 1.0 + tol) throw TimeStepError("BGRW: rx + rz above 1");
  for (std::size_t s = 0; s < d.u.size(); ++s) {
    if (g.nx > 1 && std::abs(d.u[s]) > p.rx * (1.0 + tol) + tol * 1e-3)
      throw TimeStepError("BGRW: |u| exceeds rx (local Peclet above 2)");
    if (g.nz > 1 && std::abs(d.v[s]) > p.rz * (1.0 + tol) + tol * 1e-3)
      throw TimeStepError("BGRW: |v| exceeds rz (local Peclet above 2)");
  }
}

// Local Peclet admissibility for constant V, D: V dz / D <= 2.
inline bool peclet_admissible(double velocity, double diffusion, double h) {
  return std::abs(velocity) * h <= 2.0 * diffusion * (1.0 + 1e-12);
}

struct TransportOptions {
  RedistributionMode mode{RedistributionMode::Deterministic};
  double n_total{1e24};
  bool check_constraints{true};  // off only to reproduce runs outside the admissible range
  bool volume_weighted_norm{false};
  SourceTiming source_timing{SourceTiming::Current};
  std::uint64_t seed{0};
};

// Biased walk with L-scheme source. Decoupled transport is the special case
// L = 1, theta = 1 and a single iteration per step.
class BgrwTransport {
 public:
  BgrwTransport(TransportProblem p, TransportOptions opt = {})
      : p_(std::move(p)), opt_(opt), red_(opt.mode, 0, opt.seed ^ 0xC0FFEEULL) {
    const Grid& g = p_.grid;
    g.validate();
    require(static_cast<bool>(p_.boundary), "transport problem: boundary function required");
    require(p_.c0.size() == g.size(), "transport problem: initial concentration size mismatch");
    require(p_.d1 >= 0.0 && p_.d2 >= 0.0, "transport problem: negative diffusion");
    c_ = p_.c0;
    n_ = c_;
    for (auto& x : n_) x *= opt_.n_total;
    next_.assign(g.size(), 0.0);
    thc_old_.assign(g.size(), 0.0);
    src_.assign(g.size(), 0.0);
    kind_.assign(g.size(), BoundaryCondition::Kind::NoFlow);
    bvalue_.assign(g.size(), 0.0);
    is_boundary_.assign(g.size(), 0);
    for (std::size_t j = 0; j < g.nz; ++j)
      for (std::size_t i = 0; i < g.nx; ++i) is_boundary_[g.index(i, j)] = on_boundary(g, i, j);
    if (opt_.mode != RedistributionMode::Deterministic) red_.resize(5 * g.size());
  }

  const std::vector<double>& concentration() const { return c_; }
  const std::vector<double>& counts() const { return n_; }
  const TransportProblem& problem() const { return p_; }
  double time() const { return t_; }
  double dt() const { return dt_; }
  double last_norm() const { return last_norm_; }

  // Starts [t, t+dt]. theta_old holds theta(psi_{k-1}, c_{k-1}) per site; empty means 1.
  void begin_step(double dt, double l_param, std::span<const double> theta_old = {}) {
    require(dt > 0.0 && l_param > 0.0, "transport: dt and L must be positive");
    const Grid& g = p_.grid;
    dt_ = dt;
    params_ = make_bgrw_params(p_.d1, p_.d2, dt, g, l_param);
    const double t_new = t_ + dt;
    const double t_src = opt_.source_timing == SourceTiming::Current ? t_new : t_;
    for (std::size_t j = 0; j < g.nz; ++j)
      for (std::size_t i = 0; i < g.nx; ++i) {
        const std::size_t s = g.index(i, j);
        thc_old_[s] = (theta_old.empty() ? 1.0 : theta_old[s]) * c_[s];
        src_[s] = p_.source ? p_.source(g.x(i), g.z(j), t_src) : 0.0;
        if (is_boundary_[s]) {
          const BoundaryCondition bc = p_.boundary(make_boundary_node(g, i, j), t_new);
          kind_[s] = bc.kind;
          bvalue_[s] = bc.value;
          if (bc.kind == BoundaryCondition::Kind::Dirichlet) {
            c_[s] = bc.value;
            n_[s] = bc.value * opt_.n_total;
          }
        }
      }
    red_.reset();
  }

  // One BGRW iteration with velocity vel and water content theta(site, c)
  // evaluated at the current iterate. Returns the correction norm.
  template <class ThetaFn>
  double iterate(const VelocityField& vel, ThetaFn&& theta) {
    const Grid& g = p_.grid;
    const DriftNumbers d = drift_numbers(vel, dt_, params_.l_param);
    if (opt_.check_constraints) check_bgrw(params_, d, g);
    const double rx = g.nx > 1 ? params_.rx : 0.0;
    const double rz = g.nz > 1 ? params_.rz : 0.0;
    const double L = params_.l_param;
    const bool deterministic = opt_.mode == RedistributionMode::Deterministic;
    if (!deterministic) std::fill(next_.begin(), next_.end(), 0.0);

    for (std::size_t j = 0; j < g.nz; ++j) {
      for (std::size_t i = 0; i < g.nx; ++i) {
        const std::size_t s = g.index(i, j);
        const bool dir = is_boundary_[s] && kind_[s] == BoundaryCondition::Kind::Dirichlet;
        double gsrc = 0.0;
        if (!dir) {
          if (p_.reaction) gsrc += p_.reaction(c_[s]) * dt_ / L;
          gsrc -= (theta(s, c_[s]) * c_[s] - thc_old_[s]) / L;
          gsrc += dt_ * src_[s] / L;
          if (is_boundary_[s] && kind_[s] == BoundaryCondition::Kind::Flux) {
            const double h = (j == 0 || j + 1 == g.nz) ? g.dz : g.dx;
            gsrc += dt_ * bvalue_[s] / (L * h);
          }
        }
        const bool has_w = g.nx > 1 && i > 0, has_e = g.nx > 1 && i + 1 < g.nx;
        const bool has_dn = g.nz > 1 && j > 0, has_up = g.nz > 1 && j + 1 < g.nz;
        if (deterministic) {
          if (dir) {
            next_[s] = n_[s];
            continue;
          }
          // Gather; outward shares of this site that hit a wall stay put.
          double stay = 1.0 - (rx + rz);
          if (!has_w) stay += 0.5 * (rx - d.u[s]);
          if (!has_e) stay += 0.5 * (rx + d.u[s]);
          if (!has_dn) stay += 0.5 * (rz - d.v[s]);
          if (!has_up) stay += 0.5 * (rz + d.v[s]);
          double acc = stay * n_[s];
          if (has_e) acc += 0.5 * (rx - d.u[s + 1]) * n_[s + 1];
          if (has_w) acc += 0.5 * (rx + d.u[s - 1]) * n_[s - 1];
          if (has_up) acc += 0.5 * (rz - d.v[s + g.nx]) * n_[s + g.nx];
          if (has_dn) acc += 0.5 * (rz + d.v[s - g.nx]) * n_[s - g.nx];
          next_[s] = acc + gsrc * opt_.n_total;
        } else {
          const double w[4] = {has_w ? 0.5 * (rx - d.u[s]) : 0.0, has_e ? 0.5 * (rx + d.u[s]) : 0.0,
                               has_dn ? 0.5 * (rz - d.v[s]) : 0.0, has_up ? 0.5 * (rz + d.v[s]) : 0.0};
          double moved[4];
          red_.split(w, n_[s], moved, 5 * s);
          double stay = n_[s];
          if (has_w) next_[s - 1] += moved[0];
          if (has_e) next_[s + 1] += moved[1];
          if (has_dn) next_[s - g.nx] += moved[2];
          if (has_up) next_[s + g.nx] += moved[3];
          for (double m : moved) stay -= m;
          next_[s] += stay;
          if (!dir) next_[s] += red_.carry_signed(gsrc * opt_.n_total, 5 * s + 4);
        }
      }
    }
    for (std::size_t s = 0; s < g.size(); ++s)
      if (is_boundary_[s] && kind_[s] == BoundaryCondition::Kind::Dirichlet) next_[s] = bvalue_[s] * opt_.n_total;

    double diff = 0.0, norm = 0.0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      const double c = next_[s] / opt_.n_total;
      if (!std::isfinite(c)) throw TimeStepError("transport: non-finite concentration, iteration diverged");
      diff += (c - c_[s]) * (c - c_[s]);
      norm += c * c;
      c_[s] = c;
    }
    std::swap(n_, next_);
    const double vol = opt_.volume_weighted_norm ? g.cell_volume() : 1.0;
    last_norm_ = std::sqrt(norm * vol);
    return std::sqrt(diff * vol);
  }

  double iterate(const VelocityField& vel) {
    return iterate(vel, [](std::size_t, double) { return 1.0; });
  }

  void end_step() { t_ += dt_; }

  struct Checkpoint {
    std::vector<double> c, counts;
  };
  Checkpoint checkpoint() const { return {c_, n_}; }
  void rollback(const Checkpoint& k) {
    c_ = k.c;
    n_ = k.counts;
  }

  // Decoupled step: L = 1, theta = 1, one pass.
  void decoupled_step(const VelocityField& vel, double dt) {
    begin_step(dt, 1.0);
    iterate(vel);
    end_step();
  }

 private:
  TransportProblem p_;
  TransportOptions opt_;
  Redistributor red_;
  BgrwParams params_;
  std::vector<double> c_, n_, next_, thc_old_, src_, bvalue_;
  std::vector<BoundaryCondition::Kind> kind_;
  std::vector<char> is_boundary_;
  double t_{0.0}, dt_{0.0}, last_norm_{0.0};
};

// Raw FTCS arithmetic of the biased walk for a single interior site; used as
// an independent reference for the gather form.
inline double bgrw_site_update(double c, double ce, double cw, double cn, double cs, double ue, double uw,
                               double vn, double vs, const BgrwParams& p) {
  return (1.0 - (p.rx + p.rz)) * c + 0.5 * (p.rx - ue) * ce + 0.5 * (p.rx + uw) * cw + 0.5 * (p.rz - vn) * cn +
         0.5 * (p.rz + vs) * cs;
}

// ---------------------------------------------------------------------------
// Unbiased walk
// ---------------------------------------------------------------------------

struct UgrwParams {
  int d{1};
  double rx{0.0};
  double rz{0.0};
  std::vector<int> u;
  std::vector<int> v;
};

inline int integer_shift(double dt, double velocity, double h, double l_param = 1.0) {
  return static_cast<int>(std::floor(dt * velocity / (l_param * h) + 0.5));
}

inline UgrwParams make_ugrw_params(const VelocityField& vel, double d1, double d2, double dt, int d,
                                   double l_param = 1.0) {
  const Grid& g = vel.grid;
  require(d >= 1, "UGRW: jump amplitude must be at least 1");
  UgrwParams p;
  p.d = d;
  const double dd = static_cast<double>(d);
  p.rx = g.nx > 1 ? 2.0 * d1 * dt / (l_param * dd * dd * g.dx * g.dx) : 0.0;
  p.rz = g.nz > 1 ? 2.0 * d2 * dt / (l_param * dd * dd * g.dz * g.dz) : 0.0;
  if (p.rx + p.rz > 1.0 + 1e-12) throw TimeStepError("UGRW: rx + rz above 1");
  p.u.resize(g.size());
  p.v.resize(g.size());
  for (std::size_t s = 0; s < g.size(); ++s) {
    p.u[s] = integer_shift(dt, vel.u[s], g.dx, l_param);
    p.v[s] = integer_shift(dt, vel.v[s], g.dz, l_param);
  }
  return p;
}

// Smallest amplitude d with rx + rz <= cap.
inline int choose_jump_amplitude(double d1, double d2, double dt, const Grid& g, double cap = 1.0,
                                 double l_param = 1.0) {
  const double base = 2.0 * dt / l_param *
                      ((g.nx > 1 ? d1 / (g.dx * g.dx) : 0.0) + (g.nz > 1 ? d2 / (g.dz * g.dz) : 0.0));
  int d = std::max(1, static_cast<int>(std::ceil(std::sqrt(base / cap) - 1e-12)));
  while (base / (static_cast<double>(d) * d) > cap * (1.0 + 1e-12)) ++d;
  return d;
}

enum class TransportScheme { Biased, Unbiased };

struct TransportStepChoice {
  double dt{0.0};
  int d{1};
};

// Biased: largest dt with rx + rz <= cap (Peclet is dt independent and is
// checked separately). Unbiased: dt resolving the fastest velocity by
// `resolution` sites per step, then the smallest admissible d.
inline TransportStepChoice choose_transport_dt(const VelocityField& vel, double d1, double d2, TransportScheme scheme,
                                               double resolution = 1.0, double cap = 1.0, double l_param = 1.0) {
  const Grid& g = vel.grid;
  const double diff_rate = 2.0 * ((g.nx > 1 ? d1 / (g.dx * g.dx) : 0.0) + (g.nz > 1 ? d2 / (g.dz * g.dz) : 0.0));
  if (scheme == TransportScheme::Biased) {
    if (diff_rate <= 0.0) throw TimeStepError("BGRW: no admissible time step without diffusion");
    for (std::size_t s = 0; s < vel.u.size(); ++s) {
      if (g.nx > 1 && !peclet_admissible(vel.u[s], d1, g.dx)) throw TimeStepError("BGRW: local Peclet above 2");
      if (g.nz > 1 && !peclet_admissible(vel.v[s], d2, g.dz)) throw TimeStepError("BGRW: local Peclet above 2");
    }
    return {cap * l_param / diff_rate, 1};
  }
  double vmax = 0.0;
  for (std::size_t s = 0; s < vel.u.size(); ++s)
    vmax = std::max({vmax, std::abs(vel.u[s]) / g.dx, std::abs(vel.v[s]) / g.dz});
  if (vmax <= 0.0) {
    if (diff_rate <= 0.0) throw TimeStepError("UGRW: neither velocity nor diffusion sets a time scale");
    return {cap * l_param / diff_rate, 1};
  }
  const double dt = resolution * l_param / vmax;
  return {dt, choose_jump_amplitude(d1, d2, dt, g, cap, l_param)};
}

// One decoupled unbiased step on counts n. Groups that would leave the grid
// are re-deposited on the boundary site they cross unless that site carries
// a Dirichlet value, in which case they are dropped (the value is re-imposed
// by the caller). `dirichlet` marks such sites; empty means none.
inline std::vector<double> ugrw_step(std::span<const double> n, const Grid& g, const UgrwParams& p,
                                     std::span<const char> dirichlet = {}, Redistributor* red = nullptr,
                                     std::span<const double> source_counts = {}) {
  require(n.size() == g.size(), "UGRW: size mismatch");
  std::vector<double> out(g.size(), 0.0);
  const long nx = static_cast<long>(g.nx), nz = static_cast<long>(g.nz);
  auto deposit = [&](long i, long j, double amount) {
    const long ci = std::clamp(i, 0L, nx - 1), cj = std::clamp(j, 0L, nz - 1);
    const std::size_t s = g.index(static_cast<std::size_t>(ci), static_cast<std::size_t>(cj));
    if ((ci != i || cj != j) && !dirichlet.empty() && dirichlet[s]) return;
    out[s] += amount;
  };
  const double hx = 0.5 * p.rx, hz = 0.5 * p.rz;
  for (long j = 0; j < nz; ++j)
    for (long i = 0; i < nx; ++i) {
      const std::size_t s = g.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      const double m = n[s];
      if (m == 0.0) continue;
      const long ti = i + p.u[s], tj = j + p.v[s];
      if (red == nullptr || red->mode() == RedistributionMode::Deterministic) {
        deposit(ti, tj, (1.0 - (p.rx + p.rz)) * m);
        if (hx > 0.0) {
          deposit(ti + p.d, tj, hx * m);
          deposit(ti - p.d, tj, hx * m);
        }
        if (hz > 0.0) {
          deposit(ti, tj + p.d, hz * m);
          deposit(ti, tj - p.d, hz * m);
        }
      } else {
        const double w[4] = {hx, hx, hz, hz};
        double moved[4];
        red->split(w, m, moved, 5 * s);
        double stay = m;
        for (double x : moved) stay -= x;
        deposit(ti, tj, stay);
        deposit(ti + p.d, tj, moved[0]);
        deposit(ti - p.d, tj, moved[1]);
        deposit(ti, tj + p.d, moved[2]);
        deposit(ti, tj - p.d, moved[3]);
      }
    }
  if (!source_counts.empty()) {
    require(source_counts.size() == g.size(), "UGRW: source size mismatch");
    for (std::size_t s = 0; s < g.size(); ++s)
      out[s] += red && red->mode() != RedistributionMode::Deterministic ? red->carry_signed(source_counts[s], 5 * s + 4)
                                                                        : source_counts[s];
  }
  return out;
}

}  // namespace grw
