#pragma once

// Refinement studies against manufactured solutions: 2D flow, 2D coupled,
// 1D coupled and 1D degenerate coupled problems on the unit square/interval
// up to t = 1.

#include <cmath>
#include <string>
#include <vector>

#include "grw/analysis.hpp"
#include "grw/bench/common.hpp"
#include "grw/bench/mms.hpp"
#include "grw/bench/parallel.hpp"
#include "grw/coupling.hpp"
#include "grw/flow.hpp"

namespace grw::bench {

namespace detail {

inline Grid unit_grid(double h, bool two_d) { return two_d ? plane_grid(1.0, 1.0, h, h) : column_grid(1.0, h); }

struct FlowLevel {
  double h{0.0}, err{0.0};
  std::size_t steps{0}, iterations{0}, unconverged{0};
  std::vector<double> psi, exact;
  Grid grid;
};

inline FlowLevel run_flow_mms_level(double h, const Params& p) {
  FlowLevel out;
  out.h = h;
  const Grid g = unit_grid(h, true);
  FlowProblem<ManufacturedLaw> prob;
  prob.grid = g;
  prob.boundary = [](const BoundaryNode& b, double t) {
    return BoundaryCondition::dirichlet(mms::Flow2D::psi(b.x, b.z, t));
  };
  prob.psi0 = sample(g, [](double x, double z) { return mms::Flow2D::psi(x, z, 0.0); });
  prob.source = [](double x, double z, double t) { return mms::Flow2D::source(x, z, t); };
  prob.t_end = p.num("t-end");
  LSchemeConfig cfg;
  cfg.l_param = p.num("l-param");
  cfg.eps_a = p.num("eps-a");
  cfg.eps_r = p.num("eps-r");
  cfg.r_max = p.num("r-max");
  cfg.max_iters = p.count("max-iters");
  FlowOptions opt;
  opt.source_timing = parse_source_timing(p.str("source-timing"));
  const FlowSolution s = solve_flow(prob, cfg, opt);
  out.exact = sample(g, [&](double x, double z) { return mms::Flow2D::psi(x, z, prob.t_end); });
  out.err = l2_distance(s.psi, out.exact, g.cell_volume());
  out.steps = s.dts.size();
  out.iterations = s.total_iterations;
  out.unconverged = s.unconverged_steps;
  out.psi = s.psi;
  out.grid = g;
  return out;
}

// Exact solution interface for the coupled studies.
struct CoupledCase {
  bool two_d{true};
  bool degenerate{false};
  std::function<double(double, double, double)> psi, c;
  std::function<std::pair<double, double>(double, double, double)> sources;  // (fp, fc)
  VelocityCallback flux;
};

inline CoupledCase coupled_case(const std::string& which, double d) {
  CoupledCase cc;
  if (which == "2d") {
    mms::Coupled2D m{d};
    cc.psi = [](double x, double z, double t) { return mms::Coupled2D::psi(x, z, t); };
    cc.c = [](double x, double z, double t) { return mms::Coupled2D::c(x, z, t); };
    cc.sources = [m](double x, double z, double t) {
      const auto s = m.sources(x, z, t);
      return std::pair<double, double>{s.fp, s.fc};
    };
    cc.flux = [](double x, double z, double t) { return mms::Coupled2D::flux(x, z, t); };
  } else if (which == "1d") {
    mms::Coupled1D m{d};
    cc.two_d = false;
    cc.psi = [](double, double z, double t) { return mms::Coupled1D::psi(z, t); };
    cc.c = [](double, double z, double t) { return mms::Coupled1D::c(z, t); };
    cc.sources = [m](double, double z, double t) {
      const auto s = m.sources(z, t);
      return std::pair<double, double>{s.fp, s.fc};
    };
    cc.flux = [](double, double z, double t) { return std::pair<double, double>{0.0, mms::Coupled1D::flux(z, t)}; };
  } else {
    mms::Degenerate1D m{d};
    cc.two_d = false;
    cc.degenerate = true;
    cc.psi = [](double, double z, double t) { return mms::Degenerate1D::psi(z, t); };
    cc.c = [](double, double z, double t) { return mms::Degenerate1D::c(z, t); };
    cc.sources = [m](double, double z, double t) {
      const auto s = m.sources(z, t);
      return std::pair<double, double>{s.fp, s.fc};
    };
    cc.flux = [](double, double z, double t) {
      return std::pair<double, double>{0.0, mms::Degenerate1D::flux(z, t)};
    };
  }
  return cc;
}

struct CoupledLevel {
  double h{0.0}, err_p{0.0}, err_c{0.0};
  std::size_t steps{0}, iterations{0}, unconverged{0};
  Grid grid;
  std::vector<double> psi, c, psi_exact, c_exact;
};

template <class Law>
CoupledLevel run_coupled_mms_level(const CoupledCase& cc, Law law, double h, VelocityBoundaryMode mode,
                                   const Params& p) {
  CoupledLevel out;
  out.h = h;
  const Grid g = unit_grid(h, cc.two_d);
  const double t_end = p.num("t-end");
  CoupledProblem<Law> prob;
  prob.flow.grid = g;
  prob.flow.law = law;
  auto psi = cc.psi;
  auto cf = cc.c;
  auto src = cc.sources;
  prob.flow.boundary = [psi](const BoundaryNode& b, double t) { return BoundaryCondition::dirichlet(psi(b.x, b.z, t)); };
  prob.flow.psi0 = sample(g, [&](double x, double z) { return psi(x, z, 0.0); });
  prob.flow.source = [src](double x, double z, double t) { return src(x, z, t).first; };
  prob.flow.t_end = t_end;
  prob.transport.grid = g;
  prob.transport.d1 = prob.transport.d2 = p.num("diffusion");
  prob.transport.boundary = [cf](const BoundaryNode& b, double t) { return BoundaryCondition::dirichlet(cf(b.x, b.z, t)); };
  prob.transport.c0 = sample(g, [&](double x, double z) { return cf(x, z, 0.0); });
  prob.transport.source = [src](double x, double z, double t) { return src(x, z, t).second; };
  prob.transport.t_end = t_end;
  prob.exact_velocity = cc.flux;
  CoupledConfig cfg;
  cfg.l_flow = p.num("l-flow");
  cfg.l_transport = p.num("l-transport");
  cfg.eps_a = p.num("eps-a");
  cfg.eps_r = p.num("eps-r");
  cfg.r_sum_max = p.num("r-sum-max");
  cfg.max_iters = p.count("max-iters");
  cfg.stop_on_stall = p.flag("stop-on-stall");
  cfg.velocity_mode = mode;
  FlowOptions fo;
  TransportOptions to;
  fo.source_timing = to.source_timing = parse_source_timing(p.str("source-timing"));
  const CoupledSolution s = solve_coupled(std::move(prob), cfg, fo, to);
  out.grid = g;
  out.psi_exact = sample(g, [&](double x, double z) { return psi(x, z, t_end); });
  out.c_exact = sample(g, [&](double x, double z) { return cf(x, z, t_end); });
  out.err_p = l2_distance(s.psi, out.psi_exact, g.cell_volume());
  out.err_c = l2_distance(s.c, out.c_exact, g.cell_volume());
  out.steps = s.dts.size();
  out.iterations = s.total_iterations;
  out.unconverged = s.unconverged_steps;
  out.psi = s.psi;
  out.c = s.c;
  return out;
}

inline std::vector<double> level_spacings(const Params& p) {
  const std::size_t levels = p.count("levels");
  if (levels < 1 || levels > 8) throw ConfigError("levels must lie in 1..8");
  std::vector<double> hs;
  double h = p.num("dx0");
  for (std::size_t l = 0; l < levels; ++l, h *= 0.5) hs.push_back(h);
  return hs;
}

inline std::vector<VelocityBoundaryMode> modes_from(const std::string& s) {
  if (s == "all")
    return {VelocityBoundaryMode::Analytical, VelocityBoundaryMode::ForwardDifference,
            VelocityBoundaryMode::ExtendInterior};
  return {parse_velocity_mode(s)};
}

}  // namespace detail

inline RunResult run_mms_flow_2d(const RunContext& ctx) {
  const auto hs = detail::level_spacings(ctx.params);
  std::vector<detail::FlowLevel> lv(hs.size());
  parallel_for(hs.size(), ctx.jobs, [&](std::size_t l) { lv[l] = detail::run_flow_mms_level(hs[l], ctx.params); });
  RunResult r;
  std::vector<double> errs, h;
  Series conv{"convergence", {"dx", "error", "steps", "iterations", "unconverged_steps"}, {}};
  for (const auto& L : lv) {
    errs.push_back(L.err);
    h.push_back(L.h);
    conv.add({L.h, L.err, static_cast<double>(L.steps), static_cast<double>(L.iterations),
              static_cast<double>(L.unconverged)});
    if (L.unconverged) r.converged = false;
  }
  r.results["dx"] = h;
  r.results["errors"] = errs;
  r.results["eoc"] = eoc_or_empty(errs);
  r.results["monotone"] = std::is_sorted(errs.rbegin(), errs.rend());
  std::vector<std::size_t> its, steps;
  for (const auto& L : lv) {
    its.push_back(L.iterations);
    steps.push_back(L.steps);
  }
  r.results["iterations"] = its;
  r.results["steps"] = steps;
  r.series.push_back(std::move(conv));
  const auto& fin = lv.back();
  std::vector<double> diff(fin.psi.size());
  for (std::size_t s = 0; s < diff.size(); ++s) diff[s] = fin.psi[s] - fin.exact[s];
  r.fields.push_back({"psi_finest", fin.grid, {{"psi", fin.psi}, {"exact", fin.exact}, {"error", diff}}});
  return r;
}

// Shared driver for the three coupled studies.
inline RunResult run_coupled_study(const RunContext& ctx, const std::string& which) {
  const auto hs = detail::level_spacings(ctx.params);
  const auto modes = detail::modes_from(ctx.params.str("velocity-mode"));
  const detail::CoupledCase cc = detail::coupled_case(which, ctx.params.num("diffusion"));
  const std::size_t nl = hs.size(), nm = modes.size();
  std::vector<detail::CoupledLevel> lv(nl * nm);
  parallel_for(nl * nm, ctx.jobs, [&](std::size_t k) {
    const std::size_t m = k / nl, l = k % nl;
    if (cc.degenerate)
      lv[k] = detail::run_coupled_mms_level(cc, DegenerateManufacturedLaw{}, hs[l], modes[m], ctx.params);
    else
      lv[k] = detail::run_coupled_mms_level(cc, ManufacturedLaw{}, hs[l], modes[m], ctx.params);
  });
  RunResult r;
  r.results["dx"] = hs;
  Json by_mode = Json::object();
  for (std::size_t m = 0; m < nm; ++m) {
    std::vector<double> ep, ec;
    std::vector<std::size_t> its, steps, unconv;
    Series conv{std::string("convergence_") + to_string(modes[m]),
                {"dx", "error_p", "error_c", "steps", "iterations", "unconverged_steps"},
                {}};
    for (std::size_t l = 0; l < nl; ++l) {
      const auto& L = lv[m * nl + l];
      ep.push_back(L.err_p);
      ec.push_back(L.err_c);
      its.push_back(L.iterations);
      steps.push_back(L.steps);
      unconv.push_back(L.unconverged);
      conv.add({L.h, L.err_p, L.err_c, static_cast<double>(L.steps), static_cast<double>(L.iterations),
                static_cast<double>(L.unconverged)});
      if (L.unconverged && ctx.params.flag("stop-on-stall")) r.converged = false;
    }
    Json jm;
    jm["errors_p"] = ep;
    jm["errors_c"] = ec;
    jm["eoc_p"] = eoc_or_empty(ep);
    jm["eoc_c"] = eoc_or_empty(ec);
    jm["iterations"] = its;
    jm["steps"] = steps;
    jm["unconverged_steps"] = unconv;
    by_mode[to_string(modes[m])] = jm;
    r.series.push_back(std::move(conv));
  }
  r.results["modes"] = by_mode;
  const auto& fin = lv.back();
  r.fields.push_back({"finest_" + std::string(to_string(modes.back())), fin.grid,
                      {{"psi", fin.psi}, {"psi_exact", fin.psi_exact}, {"c", fin.c}, {"c_exact", fin.c_exact}}});
  return r;
}

inline std::vector<ParamSpec> mms_flow_2d_params() {
  return {
      {"l-param", "1200", "1200", "L-scheme stabilization constant"},
      {"levels", "4", "4", "number of grid levels (dx halves per level)"},
      {"dx0", "0.1", "0.1", "coarsest spacing"},
      {"r-max", "0.24", "0.24", "jump probability per direction at max K (adaptive dt)"},
      {"eps-a", "1e-8", "1e-8", "absolute tolerance (1e-6 leaves a stopping error above the discretization error)"},
      {"eps-r", "0", "0", "relative tolerance"},
      {"max-iters", "1000000", "1000000", "iteration budget per step"},
      {"t-end", "1", "1", "final time"},
      {"source-timing", "current", "current", "time level of the source (current|lagged)"},
  };
}

inline std::vector<ParamSpec> coupled_mms_params(const std::string& l, const std::string& modes,
                                                 const std::string& max_iters, const std::string& stall) {
  return {
      {"l-flow", l, l, "flow L-scheme constant"},
      {"l-transport", l, l, "transport L-scheme constant"},
      {"levels", "4", "4", "number of grid levels"},
      {"dx0", "0.1", "0.1", "coarsest spacing"},
      {"r-sum-max", "0.5", "0.5", "cap on summed jump probabilities of both walks"},
      {"eps-a", "1e-6", "1e-6", "absolute tolerance"},
      {"eps-r", "0", "0", "relative tolerance"},
      {"max-iters", max_iters, max_iters, "sweep budget per step"},
      {"stop-on-stall", stall, stall, "abort the run when a step exhausts its budget"},
      {"t-end", "1", "1", "final time"},
      {"diffusion", "1", "1", "diffusion coefficient"},
      {"velocity-mode", modes, modes, "boundary velocity: analytical|forward|extend|all"},
      {"source-timing", "lagged", "lagged", "time level of the sources (current|lagged)"},
  };
}

}  // namespace grw::bench
