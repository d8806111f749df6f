#pragma once

// Explicit L-scheme random-walk solvers for Richards' equation on 1D columns
// and 2D vertical sections, the saturated steady-state mode, the
// normalized-content (Theta) biased walk, and Darcy velocity reconstruction.
//
// Conventions: z points up for the pressure solvers, h = psi + z. A 1D
// column is a grid with nx == 1. Boundary nodes are unknowns unless a
// Dirichlet value is imposed; a missing neighbour contributes a zero jump
// probability, i.e. walkers are reflected, which keeps the plain particle
// count conserved under no-flow conditions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "grw/constitutive.hpp"
#include "grw/errors.hpp"
#include "grw/lattice.hpp"

namespace grw {

struct LSchemeConfig {
  double l_param{1.0};
  double eps_a{0.0};
  double eps_r{1e-9};
  double r_max{0.5};
  std::size_t max_iters{1000000};
  bool record_history{false};
  // When false, a step that exhausts max_iters keeps its last iterate and the
  // run continues; the step is counted in FlowSolution::unconverged_steps.
  bool stop_on_stall{true};

  void validate() const {
    require(l_param > 0.0, "L-scheme: l_param must be positive");
    require(eps_a >= 0.0 && eps_r >= 0.0 && (eps_a > 0.0 || eps_r > 0.0),
            "L-scheme: tolerances must be nonnegative and not both zero");
    require(r_max > 0.0 && r_max <= 1.0, "L-scheme: r_max must lie in (0,1]");
    require(max_iters >= 1, "L-scheme: empty iteration budget");
  }
};

enum class MidpointRule { Arithmetic, Harmonic };
// Time level at which an external source f(x,z,t) enters step k.
enum class SourceTiming { Current, Lagged };

struct BoundaryCondition {
  // FreeDrainage: unit gradient, outflow K(psi) through the face.
  enum class Kind { Dirichlet, Flux, NoFlow, FreeDrainage };
  Kind kind{Kind::NoFlow};
  double value{0.0};  // Dirichlet head, or inward flux for Flux

  static BoundaryCondition dirichlet(double v) { return {Kind::Dirichlet, v}; }
  static BoundaryCondition flux(double inward) { return {Kind::Flux, inward}; }
  static BoundaryCondition no_flow() { return {Kind::NoFlow, 0.0}; }
  static BoundaryCondition free_drainage() { return {Kind::FreeDrainage, 0.0}; }
};

struct BoundaryNode {
  std::size_t i{0}, j{0};
  double x{0.0}, z{0.0};
  bool left{false}, right{false}, bottom{false}, top{false};
};

using BoundaryFn = std::function<BoundaryCondition(const BoundaryNode&, double t)>;
using SourceFn = std::function<double(double x, double z, double t)>;

inline bool on_boundary(const Grid& g, std::size_t i, std::size_t j) {
  const bool xb = g.nx > 1 && (i == 0 || i + 1 == g.nx);
  return xb || j == 0 || j + 1 == g.nz;
}

inline BoundaryNode make_boundary_node(const Grid& g, std::size_t i, std::size_t j) {
  BoundaryNode b{i, j, g.x(i), g.z(j), false, false, false, false};
  if (g.nx > 1) {
    b.left = i == 0;
    b.right = i + 1 == g.nx;
  }
  b.bottom = j == 0;
  b.top = j + 1 == g.nz;
  return b;
}

struct TimeStepPolicy {
  bool adaptive{true};
  double dt_fixed{0.0};
  double dt_max{std::numeric_limits<double>::infinity()};
  // Times the stepping must hit exactly (forcing switches, outputs).
  std::vector<double> checkpoints;
};

// r = K dt / (L dz^2)
inline double jump_probability(double k_half, double dt, double dz, double l_param) {
  require(k_half >= 0.0, "jump_probability: negative conductivity");
  return k_half * dt / (l_param * dz * dz);
}

struct JumpPair {
  double plus{0.0};
  double minus{0.0};
};

inline JumpPair jump_probabilities_1d(double k_plus, double k_minus, double dt, double dz, double l_param) {
  JumpPair r{jump_probability(k_plus, dt, dz, l_param), jump_probability(k_minus, dt, dz, l_param)};
  if (!(std::isfinite(r.plus) && std::isfinite(r.minus))) throw TimeStepError("jump probabilities not finite");
  if (r.plus + r.minus > 1.0 + 1e-12) throw TimeStepError("jump probabilities sum above 1: time step too large");
  return r;
}

// Time step giving jump probability r_max at conductivity k_max.
inline double adaptive_time_step(double k_max, double l_param, double dz, double r_max) {
  require(k_max > 0.0, "adaptive_time_step: k_max must be positive");
  return r_max * l_param * dz * dz / k_max;
}

inline double midpoint_k(double a, double b, MidpointRule rule) {
  if (rule == MidpointRule::Arithmetic) return 0.5 * (a + b);
  return (a + b > 0.0) ? 2.0 * a * b / (a + b) : 0.0;
}

// ---------------------------------------------------------------------------
// Darcy velocity
// ---------------------------------------------------------------------------

enum class VelocityBoundaryMode { Analytical, ForwardDifference, ExtendInterior };

struct VelocityField {
  Grid grid;
  std::vector<double> u;  // x component
  std::vector<double> v;  // z component
};

using VelocityCallback = std::function<std::pair<double, double>(double x, double z, double t)>;

// Centered differences inside, boundary completion per mode.
inline VelocityField darcy_velocity(const Grid& g, std::span<const double> psi, std::span<const double> k_site,
                                    VelocityBoundaryMode mode, const VelocityCallback& exact = {},
                                    double t = 0.0, bool gravity = true) {
  require(psi.size() == g.size() && k_site.size() == g.size(), "darcy_velocity: size mismatch");
  if (mode == VelocityBoundaryMode::Analytical && !exact)
    throw ConfigError("darcy_velocity: analytical boundary mode needs a callback");
  VelocityField out{g, std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0)};
  const double grav = gravity ? 1.0 : 0.0;
  auto id = [&](std::size_t i, std::size_t j) { return g.index(i, j); };
  for (std::size_t j = 0; j < g.nz; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t s = id(i, j);
      const double k = k_site[s];
      if (g.nx > 1) {
        if (i > 0 && i + 1 < g.nx) {
          out.u[s] = -k * (psi[id(i + 1, j)] - psi[id(i - 1, j)]) / (2.0 * g.dx);
        } else if (mode == VelocityBoundaryMode::ForwardDifference) {
          out.u[s] = i == 0 ? -k * (psi[id(1, j)] - psi[s]) / g.dx : -k * (psi[s] - psi[id(i - 1, j)]) / g.dx;
        }
      }
      if (g.nz > 1) {
        if (j > 0 && j + 1 < g.nz) {
          out.v[s] = -k * ((psi[id(i, j + 1)] - psi[id(i, j - 1)]) / (2.0 * g.dz) + grav);
        } else if (mode == VelocityBoundaryMode::ForwardDifference) {
          out.v[s] = j == 0 ? -k * ((psi[id(i, 1)] - psi[s]) / g.dz + grav)
                            : -k * ((psi[s] - psi[id(i, j - 1)]) / g.dz + grav);
        }
      }
    }
  }
  if (mode == VelocityBoundaryMode::ExtendInterior) {
    for (std::size_t j = 0; j < g.nz; ++j) {
      if (g.nx > 2) {
        out.u[id(0, j)] = out.u[id(1, j)];
        out.u[id(g.nx - 1, j)] = out.u[id(g.nx - 2, j)];
      }
    }
    if (g.nz > 2) {
      for (std::size_t i = 0; i < g.nx; ++i) {
        out.v[id(i, 0)] = out.v[id(i, 1)];
        out.v[id(i, g.nz - 1)] = out.v[id(i, g.nz - 2)];
      }
    }
  } else if (mode == VelocityBoundaryMode::Analytical) {
    for (std::size_t j = 0; j < g.nz; ++j)
      for (std::size_t i = 0; i < g.nx; ++i) {
        const std::size_t s = id(i, j);
        const bool xb = g.nx > 1 && (i == 0 || i + 1 == g.nx);
        const bool zb = g.nz > 1 && (j == 0 || j + 1 == g.nz);
        if (!xb && !zb) continue;
        auto q = exact(g.x(i), g.z(j), t);
        if (xb) out.u[s] = q.first;
        if (zb) out.v[s] = q.second;
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pressure-form problem and solver
// ---------------------------------------------------------------------------

template <class Law>
struct FlowProblem {
  Grid grid;
  Law law{};
  std::vector<double> k_scale;        // per-site conductivity multiplier; empty means 1
  BoundaryFn boundary;                // required
  std::vector<double> psi0;           // initial head, one per site
  SourceFn source;                    // optional volumetric source
  std::vector<double> concentration;  // frozen c for theta(psi, c); empty means 0
  bool gravity{true};
  bool stationary{false};  // drop the storage term and iterate to steady state
  double t_end{1.0};
  TimeStepPolicy dt;
  std::vector<double> output_times;
};

struct FlowOptions {
  RedistributionMode mode{RedistributionMode::Deterministic};
  double n_total{1e24};
  double unit_scale{1.0};
  MidpointRule midpoint{MidpointRule::Arithmetic};
  SourceTiming source_timing{SourceTiming::Current};
  bool volume_weighted_norm{false};  // stopping-rule norm; plain Euclidean by default
  std::uint64_t seed{0};
};

struct Snapshot {
  double t{0.0};
  std::vector<double> values;
};

struct FlowSolution {
  Grid grid;
  std::vector<double> psi;
  std::vector<double> theta;
  std::vector<double> k;
  VelocityField velocity;
  std::vector<double> times;                       // end time of each step
  std::vector<double> dts;                         // step sizes
  std::vector<std::size_t> iterations;             // per step
  std::vector<std::vector<double>> histories;      // correction norms per step
  std::vector<Snapshot> snapshots;                 // psi at requested output times
  std::size_t total_iterations{0};
  std::size_t unconverged_steps{0};
  bool converged{true};
  double final_correction{0.0};
};

template <class Law>
class FlowSolver {
 public:
  FlowSolver(FlowProblem<Law> problem, LSchemeConfig cfg, FlowOptions opt = {})
      : p_(std::move(problem)), cfg_(cfg), opt_(opt), red_(opt.mode, 0, opt.seed) {
    const Grid& g = p_.grid;
    g.validate();
    cfg_.validate();
    require(static_cast<bool>(p_.boundary), "flow problem: boundary function required");
    require(p_.psi0.size() == g.size(), "flow problem: initial head size mismatch");
    require(p_.k_scale.empty() || p_.k_scale.size() == g.size(), "flow problem: k_scale size mismatch");
    require(p_.concentration.empty() || p_.concentration.size() == g.size(),
            "flow problem: concentration size mismatch");
    require(g.axis == ZAxis::Up, "flow problem: pressure solvers use an upward z axis");
    n_ = ParticleField::from_values(p_.psi0, opt_.n_total, opt_.unit_scale);
    psi_ = p_.psi0;
    conc_ = p_.concentration.empty() ? std::vector<double>(g.size(), 0.0) : p_.concentration;
    k_.assign(g.size(), 0.0);
    theta_old_.assign(g.size(), 0.0);
    src_.assign(g.size(), 0.0);
    kind_.assign(g.size(), BoundaryCondition::Kind::NoFlow);
    bvalue_.assign(g.size(), 0.0);
    next_.assign(g.size(), 0.0);
    is_boundary_.assign(g.size(), 0);
    for (std::size_t j = 0; j < g.nz; ++j)
      for (std::size_t i = 0; i < g.nx; ++i) is_boundary_[g.index(i, j)] = on_boundary(g, i, j);
    if (opt_.mode != RedistributionMode::Deterministic) red_.resize(5 * g.size());
    update_conductivity();
  }

  const FlowProblem<Law>& problem() const { return p_; }
  const LSchemeConfig& config() const { return cfg_; }
  const std::vector<double>& psi() const { return psi_; }
  const std::vector<double>& conductivity() const { return k_; }
  const ParticleField& particles() const { return n_; }
  double dt() const { return dt_; }
  double time() const { return t_; }
  const std::vector<double>& theta_old() const { return theta_old_; }

  void set_concentration(std::span<const double> c) {
    require(c.size() == conc_.size(), "flow solver: concentration size mismatch");
    std::copy(c.begin(), c.end(), conc_.begin());
    update_conductivity();
  }
  std::vector<double> theta() const {
    std::vector<double> th(psi_.size());
    for (std::size_t s = 0; s < psi_.size(); ++s) th[s] = p_.law.theta(psi_[s], conc_[s]);
    return th;
  }
  double k_site(std::size_t s) const {
    const double kk = p_.law.conductivity(psi_[s], conc_[s]);
    return p_.k_scale.empty() ? kk : kk * p_.k_scale[s];
  }
  double k_max() const { return *std::max_element(k_.begin(), k_.end()); }

  // Largest conductivity the next step can see: the current field and the
  // Dirichlet heads prescribed at the current time.
  double k_max_ahead() const {
    double km = k_max();
    const Grid& g = p_.grid;
    for (std::size_t j = 0; j < g.nz; ++j)
      for (std::size_t i = 0; i < g.nx; ++i) {
        const std::size_t s = g.index(i, j);
        if (!is_boundary_[s]) continue;
        const BoundaryCondition bc = p_.boundary(make_boundary_node(g, i, j), t_);
        if (bc.kind != BoundaryCondition::Kind::Dirichlet || !std::isfinite(bc.value)) continue;
        const double kk = p_.law.conductivity(bc.value, conc_[s]);
        km = std::max(km, p_.k_scale.empty() ? kk : kk * p_.k_scale[s]);
      }
    return km;
  }

  // Proposed time step for the current state.
  double propose_dt() const {
    double dt = p_.dt.adaptive
                    ? adaptive_time_step(k_max_ahead(), cfg_.l_param, std::min(p_.grid.dx, p_.grid.dz), cfg_.r_max)
                    : p_.dt.dt_fixed;
    return std::min(dt, p_.dt.dt_max);
  }

  // Starts time step [t, t+dt]: stores old water content, evaluates boundary
  // data and sources, and resets the remainder streams.
  void begin_step(double dt, std::span<const double> conc_old = {}) {
    require(dt > 0.0, "flow solver: time step must be positive");
    dt_ = dt;
    const double t_new = t_ + dt;
    const Grid& g = p_.grid;
    for (std::size_t s = 0; s < g.size(); ++s) {
      const double c_old = conc_old.empty() ? conc_[s] : conc_old[s];
      theta_old_[s] = p_.law.theta(psi_[s], c_old);
    }
    const double t_src = opt_.source_timing == SourceTiming::Current ? t_new : t_;
    for (std::size_t j = 0; j < g.nz; ++j)
      for (std::size_t i = 0; i < g.nx; ++i) {
        const std::size_t s = g.index(i, j);
        src_[s] = p_.source ? p_.source(g.x(i), g.z(j), t_src) : 0.0;
        if (is_boundary_[s]) {
          const BoundaryCondition bc = p_.boundary(make_boundary_node(g, i, j), t_new);
          kind_[s] = bc.kind;
          bvalue_[s] = bc.value;
          if (bc.kind == BoundaryCondition::Kind::Dirichlet) {
            if (!std::isfinite(bc.value)) throw ContractViolation("flow problem: non-finite Dirichlet value");
            psi_[s] = bc.value;
            n_.counts[s] = n_.to_count(bc.value);
          }
        }
      }
    red_.reset();
    update_conductivity();
    iter_in_step_ = 0;
  }

  // One L-scheme iteration. Returns the correction norm.
  double iterate() {
    const Grid& g = p_.grid;
    // The stationary fixed point does not depend on the pseudo time step, so
    // it follows the conductivity as the iterate evolves.
    if (p_.stationary && p_.dt.adaptive) dt_ = propose_dt();
    const double L = cfg_.l_param;
    const double cx = dt_ / (L * g.dx * g.dx), cz = dt_ / (L * g.dz * g.dz);
    const double inv_scale = opt_.n_total / opt_.unit_scale;
    const bool deterministic = opt_.mode == RedistributionMode::Deterministic;
    if (!deterministic) std::fill(next_.begin(), next_.end(), 0.0);

    for (std::size_t j = 0; j < g.nz; ++j) {
      for (std::size_t i = 0; i < g.nx; ++i) {
        const std::size_t s = g.index(i, j);
        const Jumps r = jumps(i, j, cx, cz);
        const double sum = r.w + r.e + r.dn + r.up;
        if (sum > 1.0 + 1e-12) throw TimeStepError("flow: jump probabilities sum above 1 at a site");
        const bool dir = is_boundary_[s] && kind_[s] == BoundaryCondition::Kind::Dirichlet;
        double f = 0.0;
        if (!dir) {
          if (p_.gravity) f += (r.up - r.dn) * g.dz;
          if (!p_.stationary) f -= (p_.law.theta(psi_[s], conc_[s]) - theta_old_[s]) / L;
          f += dt_ * src_[s] / L;
          if (is_boundary_[s] && kind_[s] == BoundaryCondition::Kind::Flux) {
            const double h = (j == 0 || j + 1 == g.nz) ? g.dz : g.dx;
            f += dt_ * bvalue_[s] / (L * h);
          } else if (is_boundary_[s] && kind_[s] == BoundaryCondition::Kind::FreeDrainage) {
            f -= dt_ * k_[s] / (L * g.dz);
          }
        }
        if (deterministic) {
          if (dir) {
            next_[s] = n_.counts[s];
            continue;
          }
          double acc = (1.0 - sum) * n_.counts[s];
          if (r.w > 0.0) acc += r.w * n_.counts[s - 1];
          if (r.e > 0.0) acc += r.e * n_.counts[s + 1];
          if (r.dn > 0.0) acc += r.dn * n_.counts[s - g.nx];
          if (r.up > 0.0) acc += r.up * n_.counts[s + g.nx];
          next_[s] = acc + f * inv_scale;
        } else {
          const double w[4] = {r.w, r.e, r.dn, r.up};
          double moved[4];
          red_.split(w, n_.counts[s], moved, 5 * s);
          double stay = n_.counts[s];
          if (r.w > 0.0) next_[s - 1] += moved[0];
          if (r.e > 0.0) next_[s + 1] += moved[1];
          if (r.dn > 0.0) next_[s - g.nx] += moved[2];
          if (r.up > 0.0) next_[s + g.nx] += moved[3];
          for (double m : moved) stay -= m;
          next_[s] += stay;
          if (!dir) next_[s] += red_.carry_signed(f * inv_scale, 5 * s + 4);
        }
      }
    }
    // Dirichlet sites keep their prescribed values.
    for (std::size_t s = 0; s < g.size(); ++s)
      if (is_boundary_[s] && kind_[s] == BoundaryCondition::Kind::Dirichlet) next_[s] = n_.to_count(bvalue_[s]);

    double diff = 0.0, norm = 0.0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      const double v = n_.to_value(next_[s]);
      if (!std::isfinite(v)) throw TimeStepError("flow: non-finite head, iteration diverged");
      diff += (v - psi_[s]) * (v - psi_[s]);
      norm += v * v;
      psi_[s] = v;
    }
    std::swap(n_.counts, next_);
    const double vol = opt_.volume_weighted_norm ? g.cell_volume() : 1.0;
    last_norm_ = std::sqrt(norm * vol);
    last_corr_ = std::sqrt(diff * vol);
    update_conductivity();
    ++iter_in_step_;
    return last_corr_;
  }

  // State needed to retry a rejected step.
  struct Checkpoint {
    std::vector<double> psi, counts;
  };
  Checkpoint checkpoint() const { return {psi_, n_.counts}; }
  void rollback(const Checkpoint& c) {
    psi_ = c.psi;
    n_.counts = c.counts;
    update_conductivity();
  }

  bool converged(double corr) const { return corr <= cfg_.eps_a + cfg_.eps_r * last_norm_; }
  double last_norm() const { return last_norm_; }

  void end_step() { t_ += dt_; }

  // Full time loop (or the single pseudo-time loop in stationary mode).
  FlowSolution solve() {
    FlowSolution out;
    out.grid = p_.grid;
    std::vector<double> stops = p_.dt.checkpoints;
    for (double t : p_.output_times) stops.push_back(t);
    stops.push_back(p_.t_end);
    std::sort(stops.begin(), stops.end());
    std::size_t next_out = 0;
    std::vector<double> outs = p_.output_times;
    std::sort(outs.begin(), outs.end());

    if (p_.stationary) {
      begin_step(propose_dt());
      run_iterations(out);
      end_step();
    } else {
      const double tiny = 1e-12 * std::max(1.0, p_.t_end);
      double shrink = 1.0;
      while (t_ < p_.t_end - tiny) {
        double target = p_.t_end;
        for (double s : stops)
          if (s > t_ + tiny) {
            target = s;
            break;
          }
        const double remaining = target - t_;
        double dt = 0.0;
        for (int attempt = 0;; ++attempt) {
          dt = propose_dt() * shrink;
          dt = remaining / std::max(1.0, std::ceil(remaining / dt - 1e-9));
          const Checkpoint saved = checkpoint();
          try {
            begin_step(dt);
            run_iterations(out);
            break;
          } catch (const TimeStepError&) {
            // Conductivity grew during the iterations; retry with half the step.
            if (attempt >= kMaxRejections) throw;
            rollback(saved);
            shrink *= 0.5;
          }
        }
        end_step();
        // A rejection usually comes from a boundary head raising K inside the
        // step; let the step size recover once the state is accepted.
        shrink = std::min(1.0, 2.0 * shrink);
        out.times.push_back(t_);
        out.dts.push_back(dt);
        while (next_out < outs.size() && outs[next_out] <= t_ + tiny) {
          out.snapshots.push_back({outs[next_out], psi_});
          ++next_out;
        }
        if (!out.converged && cfg_.stop_on_stall) break;
      }
    }
    out.psi = psi_;
    out.theta = theta();
    out.k = k_;
    out.velocity = darcy_velocity(p_.grid, psi_, k_, VelocityBoundaryMode::ForwardDifference, {}, t_, p_.gravity);
    return out;
  }

 private:
  static constexpr int kMaxRejections = 30;

  struct Jumps {
    double w{0.0}, e{0.0}, dn{0.0}, up{0.0};
  };

  Jumps jumps(std::size_t i, std::size_t j, double cx, double cz) const {
    const Grid& g = p_.grid;
    const std::size_t s = g.index(i, j);
    Jumps r;
    if (g.nx > 1) {
      if (i > 0) r.w = cx * midpoint_k(k_[s], k_[s - 1], opt_.midpoint);
      if (i + 1 < g.nx) r.e = cx * midpoint_k(k_[s], k_[s + 1], opt_.midpoint);
    }
    if (j > 0) r.dn = cz * midpoint_k(k_[s], k_[s - g.nx], opt_.midpoint);
    if (j + 1 < g.nz) r.up = cz * midpoint_k(k_[s], k_[s + g.nx], opt_.midpoint);
    return r;
  }

  void update_conductivity() {
    for (std::size_t s = 0; s < psi_.size(); ++s) k_[s] = k_site(s);
  }

  void run_iterations(FlowSolution& out) {
    std::vector<double> hist;
    bool ok = false;
    std::size_t it = 0;
    double corr = 0.0;
    while (it < cfg_.max_iters) {
      corr = iterate();
      ++it;
      if (cfg_.record_history) hist.push_back(corr);
      if (converged(corr)) {
        ok = true;
        break;
      }
    }
    out.iterations.push_back(it);
    out.total_iterations += it;
    out.final_correction = corr;
    if (cfg_.record_history) out.histories.push_back(std::move(hist));
    if (!ok) {
      out.converged = false;
      ++out.unconverged_steps;
    }
  }

  FlowProblem<Law> p_;
  LSchemeConfig cfg_;
  FlowOptions opt_;
  Redistributor red_;
  ParticleField n_;
  std::vector<double> psi_, conc_, k_, theta_old_, src_, bvalue_, next_;
  std::vector<BoundaryCondition::Kind> kind_;
  std::vector<char> is_boundary_;
  double dt_{0.0}, t_{0.0};
  double last_corr_{0.0}, last_norm_{0.0};
  std::size_t iter_in_step_{0};
};

template <class Law>
FlowSolution solve_flow(FlowProblem<Law> problem, const LSchemeConfig& cfg, const FlowOptions& opt = {}) {
  FlowSolver<Law> solver(std::move(problem), cfg, opt);
  return solver.solve();
}

// ---------------------------------------------------------------------------
// Normalized-content (Theta) form, biased walk on a column with z downward
// ---------------------------------------------------------------------------

struct ThetaFormProblem {
  Grid grid;                                // nx == 1; index 0 is the surface
  std::function<double(double)> diffusivity;  // D(Theta)
  std::function<double(double)> drift;        // V(Theta) = dK/dTheta; may be empty
  double top_flux{0.0};                       // normalized influx Q at the surface
  std::vector<double> theta0;                 // initial Theta
  double t_end{1.0};
  double r_max{1.0};                          // cap on r = 2 dt D / dz^2
};

struct ThetaFormSolution {
  std::vector<double> big_theta;
  std::vector<double> dts;
  std::size_t steps{0};
};

// One step of the Theta-form walk. Jump coefficients use D at mid-point Theta
// and the drift at the receiving site; a missing neighbour contributes nothing
// and the surface influx enters as Q dt / dz.
inline std::vector<double> bgrw_theta_step_1d(std::span<const double> th, const std::function<double(double)>& diff,
                                              const std::function<double(double)>& drift, double dt, double dz,
                                              double top_flux) {
  const std::size_t n = th.size();
  require(n >= 2, "theta walk: column needs two sites");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rp = i + 1 < n ? 2.0 * dt * diff(0.5 * (th[i] + th[i + 1])) / (dz * dz) : 0.0;
    const double rm = i > 0 ? 2.0 * dt * diff(0.5 * (th[i] + th[i - 1])) / (dz * dz) : 0.0;
    const double v = drift ? drift(th[i]) * dt / dz : 0.0;
    if (rp > 1.0 + 1e-12 || rm > 1.0 + 1e-12) throw TimeStepError("theta walk: r above 1");
    if ((i + 1 < n && std::abs(v) > rp + 1e-12) || (i > 0 && std::abs(v) > rm + 1e-12))
      throw TimeStepError("theta walk: drift number exceeds jump number");
    double acc = (1.0 - 0.5 * (rp + rm)) * th[i];
    if (i + 1 < n) acc += 0.5 * (rp - v) * th[i + 1];
    if (i > 0) acc += 0.5 * (rm + v) * th[i - 1];
    out[i] = acc;
  }
  out[0] += top_flux * dt / dz;
  return out;
}

inline ThetaFormSolution solve_theta_form(const ThetaFormProblem& p) {
  require(p.grid.nx == 1, "theta walk: column grid expected");
  require(p.theta0.size() == p.grid.size(), "theta walk: initial size mismatch");
  require(static_cast<bool>(p.diffusivity), "theta walk: diffusivity required");
  ThetaFormSolution sol;
  sol.big_theta = p.theta0;
  double t = 0.0;
  const double dz = p.grid.dz;
  const double tiny = 1e-12 * std::max(1.0, p.t_end);
  while (t < p.t_end - tiny) {
    double dmax = 0.0;
    for (std::size_t i = 0; i + 1 < sol.big_theta.size(); ++i)
      dmax = std::max(dmax, p.diffusivity(0.5 * (sol.big_theta[i] + sol.big_theta[i + 1])));
    // |v| <= r reduces to |V| dz <= 2 D, which no time step can repair;
    // the step itself rejects such lattices.
    double dt = std::min(p.r_max * dz * dz / (2.0 * dmax), p.t_end - t);
    sol.big_theta = bgrw_theta_step_1d(sol.big_theta, p.diffusivity, p.drift, dt, dz, p.top_flux);
    sol.dts.push_back(dt);
    t += dt;
    ++sol.steps;
  }
  return sol;
}

}  // namespace grw
