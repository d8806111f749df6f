#pragma once

// Recharge from a trench into a rectangular soil section: variably saturated
// flow, and flow coupled to surfactant transport over a random conductivity.

#include <cmath>
#include <string>
#include <vector>

#include "grw/bench/common.hpp"
#include "grw/constitutive.hpp"
#include "grw/coupling.hpp"
#include "grw/flow.hpp"
#include "grw/randfield.hpp"

namespace grw::bench {

struct TrenchSoil {
  VgmParams vgm;
  double dt_ramp{1.0};  // duration of the trench head ramp
  double dt{1.0};
  double t_end{1.0};
  double l_flow{0.5};
  double l_coupled{20.0};
};

inline TrenchSoil trench_soil(const std::string& name) {
  TrenchSoil s;
  if (name == "loam") {
    s.vgm = VgmParams{0.131, 0.396, 4.96e-2, 0.423, 2.06};
    s.dt_ramp = 1.0 / 16.0;
    s.dt = 1.0 / 48.0;
    s.t_end = 3.0 / 16.0;
    s.l_flow = 0.5;
    s.l_coupled = 20.0;
  } else if (name == "clay") {
    s.vgm = VgmParams{0.0, 0.446, 8.2e-4, 0.152, 1.17};
    s.dt_ramp = 1.0;
    s.dt = 1.0 / 3.0;
    s.t_end = 3.0;
    s.l_flow = 0.12;
    s.l_coupled = 100.0;
  } else {
    throw ConfigError("unknown soil '" + name + "' (loam|clay)");
  }
  return s;
}

// Trench geometry on (0,width) x (0,height), z upward.
struct TrenchGeometry {
  double width{2.0}, height{3.0};
  double trench_end{1.0};   // top boundary x <= trench_end is the trench
  double outlet_top{1.0};   // right boundary z <= outlet_top is the outlet
  double psi_start{-2.0}, psi_rise{2.2};
  double dt_ramp{1.0};

  bool in_trench(const BoundaryNode& b) const { return b.top && b.x <= trench_end + 1e-12; }
  bool in_outlet(const BoundaryNode& b) const { return b.right && !b.top && b.z <= outlet_top + 1e-12; }
  double trench_head(double t) const { return psi_start + psi_rise * std::min(t / dt_ramp, 1.0); }
  static double outlet_head(double z) { return 1.0 - z; }
};

inline BoundaryFn trench_flow_boundary(const TrenchGeometry& geo) {
  return [geo](const BoundaryNode& b, double t) {
    if (geo.in_trench(b)) return BoundaryCondition::dirichlet(geo.trench_head(t));
    if (geo.in_outlet(b)) return BoundaryCondition::dirichlet(TrenchGeometry::outlet_head(b.z));
    return BoundaryCondition::no_flow();
  };
}

namespace detail {

inline TimeStepPolicy fixed_steps(double dt, double ramp) {
  TimeStepPolicy p;
  p.adaptive = false;
  p.dt_fixed = dt;
  p.checkpoints = {ramp};
  return p;
}

inline Json step_stats(const std::vector<std::size_t>& its) {
  std::size_t total = 0, mx = 0;
  for (auto i : its) {
    total += i;
    mx = std::max(mx, i);
  }
  return Json{{"steps", its.size()},
              {"total_iterations", total},
              {"max_iterations_per_step", mx},
              {"mean_iterations_per_step", its.empty() ? 0.0 : static_cast<double>(total) / its.size()},
              {"iterations_per_step", its}};
}

}  // namespace detail

inline RunResult run_trench_flow(const RunContext& ctx) {
  const Params& p = ctx.params;
  const std::string soil_name = p.choice("soil", {"loam", "clay"});
  const TrenchSoil soil = trench_soil(soil_name);
  TrenchGeometry geo;
  geo.dt_ramp = p.num_or("dt-ramp", soil.dt_ramp);
  const double h = p.num("dx");
  const Grid g = plane_grid(geo.width, geo.height, h, h);
  FlowProblem<VanGenuchtenLaw> fp;
  fp.grid = g;
  fp.law.p = soil.vgm;
  fp.boundary = trench_flow_boundary(geo);
  fp.psi0 = sample(g, [](double, double z) { return TrenchGeometry::outlet_head(z); });
  fp.t_end = p.num_or("t-end", soil.t_end);
  fp.dt = detail::fixed_steps(p.num_or("dt", soil.dt), geo.dt_ramp);
  LSchemeConfig c;
  c.l_param = p.num_or("l-param", soil.l_flow);
  c.eps_a = p.num("eps-a");
  c.eps_r = p.num("eps-r");
  c.max_iters = p.count("max-iters");
  c.stop_on_stall = false;
  const FlowSolution s = solve_flow(fp, c);
  RunResult r;
  r.converged = s.converged;
  r.results["soil"] = soil_name;
  r.results["l_param"] = c.l_param;
  r.results["dt"] = fp.dt.dt_fixed;
  r.results["unconverged_steps"] = s.unconverged_steps;
  r.results["iterations"] = detail::step_stats(s.iterations);
  Series st{"steps", {"t", "dt", "iterations"}, {}};
  for (std::size_t k = 0; k < s.times.size(); ++k) st.add({s.times[k], s.dts[k], static_cast<double>(s.iterations[k])});
  r.series.push_back(std::move(st));
  r.fields.push_back({"final", g, {{"psi", s.psi}, {"theta", s.theta}, {"qx", s.velocity.u}, {"qz", s.velocity.v}}});
  return r;
}

inline std::vector<ParamSpec> trench_flow_params() {
  return {
      {"soil", "loam", "loam", "loam|clay"},
      {"dx", "0.1", "0.1", "grid spacing"},
      {"l-param", "auto", "auto", "L-scheme constant (auto: soil default)"},
      {"dt", "auto", "auto", "time step (auto: soil default)"},
      {"dt-ramp", "auto", "auto", "duration of the trench head ramp (auto: soil default)"},
      {"t-end", "auto", "auto", "final time (auto: soil default)"},
      {"eps-a", "5e-6", "5e-6", "absolute tolerance"},
      {"eps-r", "5e-6", "5e-6", "relative tolerance"},
      {"max-iters", "100000", "100000", "iteration budget per step"},
  };
}

// ---------------------------------------------------------------------------
// Coupled flow and surfactant transport
// ---------------------------------------------------------------------------

namespace detail {

template <class Law>
RunResult trench_coupled_run(const RunContext& ctx, const Grid& g, Law law, std::vector<double> k_scale,
                             BoundaryFn flow_bc, BoundaryFn conc_bc, std::vector<double> psi0,
                             std::vector<double> c0, const TrenchSoil& soil, double ramp) {
  const Params& p = ctx.params;
  CoupledProblem<Law> prob;
  prob.flow.grid = g;
  prob.flow.law = law;
  prob.flow.k_scale = std::move(k_scale);
  prob.flow.boundary = std::move(flow_bc);
  prob.flow.psi0 = std::move(psi0);
  prob.flow.t_end = p.num("t-end");
  prob.flow.dt = fixed_steps(p.num_or("dt", soil.dt), ramp);
  prob.transport.grid = g;
  prob.transport.d1 = prob.transport.d2 = p.num("diffusion");
  const double rmax = p.num("reaction-max");
  prob.transport.reaction = [rmax](double c) { return reaction_rate(c, rmax); };
  prob.transport.boundary = std::move(conc_bc);
  prob.transport.c0 = std::move(c0);
  prob.transport.t_end = prob.flow.t_end;
  CoupledConfig cfg;
  cfg.l_flow = p.num_or("l-flow", soil.l_coupled);
  cfg.l_transport = p.num_or("l-transport", soil.l_coupled);
  cfg.eps_a = p.num("eps-a");
  cfg.eps_r = p.num("eps-r");
  cfg.max_iters = p.count("max-iters");
  cfg.stop_on_stall = false;
  cfg.velocity_mode = VelocityBoundaryMode::ForwardDifference;
  FlowOptions fo;
  TransportOptions to;
  to.check_constraints = false;
  const CoupledSolution s = solve_coupled(std::move(prob), cfg, fo, to);

  RunResult r;
  r.converged = s.converged;
  const double dmol = p.num("diffusion");
  double pe = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.nx > 1) pe = std::max(pe, std::abs(s.velocity.u[k]) * g.dx / dmol);
    pe = std::max(pe, std::abs(s.velocity.v[k]) * g.dz / dmol);
  }
  double cmin = s.c.front(), cmax = s.c.front(), mass = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    cmin = std::min(cmin, s.c[k]);
    cmax = std::max(cmax, s.c[k]);
    mass += s.theta[k] * s.c[k] * g.cell_volume();
  }
  r.results["l_flow"] = cfg.l_flow;
  r.results["l_transport"] = cfg.l_transport;
  r.results["max_local_peclet"] = pe;
  r.results["c_min"] = cmin;
  r.results["c_max"] = cmax;
  r.results["solute_mass"] = mass;
  r.results["unconverged_steps"] = s.unconverged_steps;
  r.results["iterations"] = step_stats(s.iterations);
  Series st{"steps", {"t", "dt", "iterations"}, {}};
  for (std::size_t k = 0; k < s.times.size(); ++k) st.add({s.times[k], s.dts[k], static_cast<double>(s.iterations[k])});
  r.series.push_back(std::move(st));
  r.fields.push_back({"final", g,
                      {{"psi", s.psi}, {"theta", s.theta}, {"c", s.c}, {"qx", s.velocity.u}, {"qz", s.velocity.v}}});
  return r;
}

}  // namespace detail

inline RunResult run_trench_coupled(const RunContext& ctx) {
  const Params& p = ctx.params;
  const std::string soil_name = p.choice("soil", {"loam", "clay"});
  const TrenchSoil soil = trench_soil(soil_name);
  TrenchGeometry geo;
  geo.dt_ramp = p.num("dt-ramp");
  const double h = p.num("dx");
  const Grid g = plane_grid(geo.width, geo.height, h, h);
  SurfactantLaw<VanGenuchtenLaw> law;
  law.base.p = soil.vgm;
  law.s = SurfactantParams{p.num("gamma-a"), p.num("gamma-b")};
  RandomFieldSpec spec;
  spec.mean = 1.0;
  spec.variance = p.num("k-variance");
  spec.corr_len_x = p.num("corr-x");
  spec.corr_len_z = p.num("corr-z");
  spec.model = CorrelationModel::Gaussian;
  spec.n_modes = p.count("modes");
  spec.seed = ctx.seed;
  std::vector<double> ks = spec.variance > 0.0 ? kraichnan_lognormal(spec, g).values : std::vector<double>{};
  BoundaryFn cbc = [geo](const BoundaryNode& b, double) {
    if (geo.in_trench(b)) return BoundaryCondition::dirichlet(1.0);
    if (geo.in_outlet(b)) return BoundaryCondition::dirichlet(0.0);
    return BoundaryCondition::no_flow();
  };
  auto psi0 = sample(g, [](double, double z) { return TrenchGeometry::outlet_head(z); });
  auto c0 = sample(g, [&](double, double z) { return z / p.num("c0-scale"); });
  RunResult r = detail::trench_coupled_run(ctx, g, law, std::move(ks), trench_flow_boundary(geo), cbc, std::move(psi0),
                                           std::move(c0), soil, geo.dt_ramp);
  r.results["soil"] = soil_name;
  return r;
}

// Column version: trench head and c = 1 on top, psi = 1 and c = 0 at the bottom.
inline RunResult run_trench_coupled_1d(const RunContext& ctx) {
  const Params& p = ctx.params;
  const std::string soil_name = p.choice("soil", {"loam", "clay"});
  const TrenchSoil soil = trench_soil(soil_name);
  TrenchGeometry geo;
  geo.dt_ramp = p.num("dt-ramp");
  const Grid g = column_grid(geo.height, p.num("dz"));
  SurfactantLaw<VanGenuchtenLaw> law;
  law.base.p = soil.vgm;
  law.s = SurfactantParams{p.num("gamma-a"), p.num("gamma-b")};
  BoundaryFn fbc = [geo](const BoundaryNode& b, double t) {
    if (b.top) return BoundaryCondition::dirichlet(geo.trench_head(t));
    return BoundaryCondition::dirichlet(TrenchGeometry::outlet_head(b.z));
  };
  BoundaryFn cbc = [](const BoundaryNode& b, double) { return BoundaryCondition::dirichlet(b.top ? 1.0 : 0.0); };
  auto psi0 = sample(g, [](double, double z) { return TrenchGeometry::outlet_head(z); });
  auto c0 = sample(g, [&](double, double z) { return z / p.num("c0-scale"); });
  RunResult r = detail::trench_coupled_run(ctx, g, law, {}, fbc, cbc, std::move(psi0), std::move(c0), soil, geo.dt_ramp);
  r.results["soil"] = soil_name;
  return r;
}

inline std::vector<ParamSpec> trench_coupled_common_params() {
  return {
      {"soil", "loam", "loam", "loam|clay"},
      {"l-flow", "auto", "auto", "flow L (auto: 20 loam, 100 clay)"},
      {"l-transport", "auto", "auto", "transport L (auto: 20 loam, 100 clay)"},
      {"dt", "auto", "auto", "time step (auto: soil default)"},
      {"dt-ramp", "1", "1", "duration of the trench head ramp"},
      {"t-end", "3", "3", "final time"},
      {"diffusion", "1e-3", "1e-3", "molecular diffusion"},
      {"reaction-max", "1e-3", "1e-3", "maximum reaction rate"},
      {"gamma-a", "0.44", "0.44", "surfactant parameter a"},
      {"gamma-b", "0.0046", "0.0046", "surfactant parameter b"},
      {"c0-scale", "1.2", "1.2", "initial concentration c0 = z / c0-scale"},
      {"eps-a", "5e-6", "5e-6", "absolute tolerance"},
      {"eps-r", "5e-6", "5e-6", "relative tolerance"},
      {"max-iters", "100000", "100000", "sweep budget per step"},
  };
}

inline std::vector<ParamSpec> trench_coupled_params() {
  auto v = trench_coupled_common_params();
  v.push_back({"dx", "0.05", "0.05", "grid spacing"});
  v.push_back({"k-variance", "0.5", "0.5", "variance of log conductivity"});
  v.push_back({"corr-x", "0.1", "0.1", "horizontal correlation length"});
  v.push_back({"corr-z", "0.01", "0.01", "vertical correlation length"});
  v.push_back({"modes", "100", "100", "Kraichnan modes"});
  return v;
}

inline std::vector<ParamSpec> trench_coupled_1d_params() {
  auto v = trench_coupled_common_params();
  v.push_back({"dz", "0.05", "0.05", "node spacing"});
  return v;
}

}  // namespace grw::bench
