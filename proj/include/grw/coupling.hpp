#pragma once

// Alternating splitting for coupled flow and reactive transport: flow and
// transport L-scheme iterations alternate inside each time step until both
// corrections meet the stopping rule.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "grw/flow.hpp"
#include "grw/transport.hpp"

namespace grw {

struct CoupledConfig {
  double l_flow{1.0};
  double l_transport{1.0};
  double eps_a{1e-6};
  double eps_r{0.0};
  // Adaptive dt keeps the summed jump probabilities of both walks at or
  // below this value.
  double r_sum_max{1.0};
  std::size_t max_iters{1000000};
  std::size_t flow_per_sweep{1};
  std::size_t transport_per_sweep{1};
  bool transport_first{false};
  bool sequential{false};  // converge flow first, then transport with the final velocity
  bool record_history{false};
  bool stop_on_stall{true};  // see LSchemeConfig::stop_on_stall
  VelocityBoundaryMode velocity_mode{VelocityBoundaryMode::ForwardDifference};

  void validate() const {
    require(l_flow > 0.0 && l_transport > 0.0, "coupled: L constants must be positive");
    require(eps_a >= 0.0 && eps_r >= 0.0 && (eps_a > 0.0 || eps_r > 0.0), "coupled: tolerances invalid");
    require(r_sum_max > 0.0 && r_sum_max <= 1.0, "coupled: r_sum_max must lie in (0,1]");
    require(flow_per_sweep >= 1 && transport_per_sweep >= 1, "coupled: empty sweep");
  }
};

template <class Law>
struct CoupledProblem {
  FlowProblem<Law> flow;       // law carries theta(psi, c)
  TransportProblem transport;  // same grid and horizon
  VelocityCallback exact_velocity;  // for the analytical boundary mode
};

struct CoupledSolution {
  Grid grid;
  std::vector<double> psi, theta, c;
  VelocityField velocity;
  std::vector<double> times, dts;
  std::vector<std::size_t> iterations;
  std::vector<std::vector<double>> flow_histories, transport_histories;
  std::vector<Snapshot> psi_snapshots, c_snapshots;
  std::size_t total_iterations{0};
  std::size_t unconverged_steps{0};
  bool converged{true};
};

template <class Law>
class CoupledSolver {
 public:
  CoupledSolver(CoupledProblem<Law> p, CoupledConfig cfg, FlowOptions fopt = {}, TransportOptions topt = {})
      : cfg_(cfg), exact_(std::move(p.exact_velocity)), law_(p.flow.law), t_end_(p.flow.t_end),
        policy_(p.flow.dt), outputs_(p.flow.output_times),
        flow_(with_l(std::move(p.flow), p.transport.c0), flow_config(cfg), fopt),
        transport_(std::move(p.transport), topt) {
    cfg_.validate();
    require(flow_.problem().grid.same_shape(transport_.problem().grid), "coupled: grids differ");
    flow_.set_concentration(transport_.concentration());
    velocity_ = current_velocity(0.0);
  }

  const std::vector<double>& psi() const { return flow_.psi(); }
  const std::vector<double>& c() const { return transport_.concentration(); }
  const VelocityField& velocity() const { return velocity_; }
  double time() const { return t_; }

  double propose_dt() const {
    if (!policy_.adaptive) return std::min(policy_.dt_fixed, policy_.dt_max);
    const Grid& g = flow_.problem().grid;
    const double inv = (g.nx > 1 ? 1.0 / (g.dx * g.dx) : 0.0) + (g.nz > 1 ? 1.0 / (g.dz * g.dz) : 0.0);
    const auto& tp = transport_.problem();
    const double dmax = std::max(tp.d1, tp.d2);
    double dt = std::numeric_limits<double>::infinity();
    const double kmax = flow_.k_max_ahead();
    if (kmax > 0.0) dt = cfg_.r_sum_max * cfg_.l_flow / (2.0 * kmax * inv);
    if (dmax > 0.0) dt = std::min(dt, cfg_.r_sum_max * cfg_.l_transport / (2.0 * dmax * inv));
    return std::min(dt, policy_.dt_max);
  }

  // Advances one time step; returns the number of outer sweeps.
  std::size_t step(double dt, CoupledSolution* log = nullptr) {
    const std::vector<double> c_old = transport_.concentration();
    std::vector<double> theta_old(c_old.size());
    for (std::size_t s = 0; s < c_old.size(); ++s) theta_old[s] = law_.theta(flow_.psi()[s], c_old[s]);
    flow_.begin_step(dt, c_old);
    transport_.begin_step(dt, cfg_.l_transport, theta_old);
    const double t_new = t_ + dt;
    std::vector<double> fh, th;
    std::size_t it = 0;
    bool ok = false;
    if (cfg_.sequential) {
      double dp = 0.0;
      for (; it < cfg_.max_iters; ++it) {
        dp = flow_.iterate();
        if (cfg_.record_history) fh.push_back(dp);
        if (dp <= cfg_.eps_a + cfg_.eps_r * flow_.last_norm()) break;
      }
      velocity_ = current_velocity(t_new);
      std::size_t jt = 0;
      for (; jt < cfg_.max_iters; ++jt) {
        const double dc = transport_iterate();
        if (cfg_.record_history) th.push_back(dc);
        if (dc <= cfg_.eps_a + cfg_.eps_r * transport_.last_norm()) {
          ok = true;
          break;
        }
      }
      it += jt + 2;
    } else {
      while (it < cfg_.max_iters) {
        double dp = 0.0, dc = 0.0;
        if (cfg_.transport_first) {
          for (std::size_t q = 0; q < cfg_.transport_per_sweep; ++q) dc = transport_iterate();
          flow_.set_concentration(transport_.concentration());
          for (std::size_t q = 0; q < cfg_.flow_per_sweep; ++q) dp = flow_.iterate();
          velocity_ = current_velocity(t_new);
        } else {
          flow_.set_concentration(transport_.concentration());
          for (std::size_t q = 0; q < cfg_.flow_per_sweep; ++q) dp = flow_.iterate();
          velocity_ = current_velocity(t_new);
          for (std::size_t q = 0; q < cfg_.transport_per_sweep; ++q) dc = transport_iterate();
        }
        ++it;
        if (cfg_.record_history) {
          fh.push_back(dp);
          th.push_back(dc);
        }
        if (dp <= cfg_.eps_a + cfg_.eps_r * flow_.last_norm() &&
            dc <= cfg_.eps_a + cfg_.eps_r * transport_.last_norm()) {
          ok = true;
          break;
        }
      }
    }
    flow_.set_concentration(transport_.concentration());
    velocity_ = current_velocity(t_new);
    flow_.end_step();
    transport_.end_step();
    t_ = t_new;
    if (log) {
      log->times.push_back(t_);
      log->dts.push_back(dt);
      log->iterations.push_back(it);
      log->total_iterations += it;
      if (!ok) {
        log->converged = false;
        ++log->unconverged_steps;
      }
      if (cfg_.record_history) {
        log->flow_histories.push_back(std::move(fh));
        log->transport_histories.push_back(std::move(th));
      }
    }
    return it;
  }

  CoupledSolution solve() {
    CoupledSolution out;
    out.grid = flow_.problem().grid;
    std::vector<double> stops = policy_.checkpoints;
    for (double t : outputs_) stops.push_back(t);
    stops.push_back(t_end_);
    std::sort(stops.begin(), stops.end());
    std::vector<double> outs = outputs_;
    std::sort(outs.begin(), outs.end());
    std::size_t next_out = 0;
    const double tiny = 1e-12 * std::max(1.0, t_end_);
    double shrink = 1.0;
    while (t_ < t_end_ - tiny) {
      double target = t_end_;
      for (double s : stops)
        if (s > t_ + tiny) {
          target = s;
          break;
        }
      const double remaining = target - t_;
      for (int attempt = 0;; ++attempt) {
        double dt = propose_dt() * shrink;
        dt = remaining / std::max(1.0, std::ceil(remaining / dt - 1e-9));
        const auto fc = flow_.checkpoint();
        const auto tc = transport_.checkpoint();
        const VelocityField vel = velocity_;
        try {
          step(dt, &out);
          break;
        } catch (const TimeStepError&) {
          if (attempt >= kMaxRejections) throw;
          flow_.rollback(fc);
          transport_.rollback(tc);
          flow_.set_concentration(transport_.concentration());
          velocity_ = vel;
          shrink *= 0.5;
        }
      }
      shrink = std::min(1.0, 2.0 * shrink);
      while (next_out < outs.size() && outs[next_out] <= t_ + tiny) {
        out.psi_snapshots.push_back({outs[next_out], flow_.psi()});
        out.c_snapshots.push_back({outs[next_out], transport_.concentration()});
        ++next_out;
      }
      if (!out.converged && cfg_.stop_on_stall) break;
    }
    out.psi = flow_.psi();
    out.c = transport_.concentration();
    out.theta.resize(out.psi.size());
    for (std::size_t s = 0; s < out.psi.size(); ++s) out.theta[s] = law_.theta(out.psi[s], out.c[s]);
    out.velocity = velocity_;
    return out;
  }

 private:
  static constexpr int kMaxRejections = 30;

  static LSchemeConfig flow_config(const CoupledConfig& c) {
    LSchemeConfig f;
    f.l_param = c.l_flow;
    f.eps_a = c.eps_a;
    f.eps_r = c.eps_r;
    f.r_max = c.r_sum_max;
    f.max_iters = c.max_iters;
    return f;
  }
  static FlowProblem<Law> with_l(FlowProblem<Law> f, const std::vector<double>& c0) {
    f.concentration = c0;
    return f;
  }

  VelocityField current_velocity(double t) const {
    return darcy_velocity(flow_.problem().grid, flow_.psi(), flow_.conductivity(), cfg_.velocity_mode, exact_, t,
                          flow_.problem().gravity);
  }

  double transport_iterate() {
    const auto& psi = flow_.psi();
    return transport_.iterate(velocity_, [&](std::size_t s, double c) { return law_.theta(psi[s], c); });
  }

  CoupledConfig cfg_;
  VelocityCallback exact_;
  Law law_;
  double t_end_;
  TimeStepPolicy policy_;
  std::vector<double> outputs_;
  FlowSolver<Law> flow_;
  BgrwTransport transport_;
  VelocityField velocity_;
  double t_{0.0};
};

template <class Law>
CoupledSolution solve_coupled(CoupledProblem<Law> p, const CoupledConfig& cfg, const FlowOptions& fopt = {},
                              const TransportOptions& topt = {}) {
  CoupledSolver<Law> solver(std::move(p), cfg, fopt, topt);
  return solver.solve();
}

}  // namespace grw
