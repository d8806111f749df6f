#pragma once

// Saturated regional aquifers: scale invariance of the steady solve,
// Monte Carlo recharge statistics and plume dispersion in random
// heterogeneous aquifers against a first-order velocity model.

#include <cmath>
#include <string>
#include <vector>

#include "grw/analysis.hpp"
#include "grw/bench/common.hpp"
#include "grw/bench/parallel.hpp"
#include "grw/constitutive.hpp"
#include "grw/flow.hpp"
#include "grw/randfield.hpp"
#include "grw/transport.hpp"

namespace grw::bench {

inline CorrelationModel parse_correlation(const std::string& s) {
  if (s == "exponential") return CorrelationModel::Exponential;
  if (s == "gaussian") return CorrelationModel::Gaussian;
  throw ConfigError("unknown correlation model '" + s + "' (exponential|gaussian)");
}

// Steady saturated head between Dirichlet values on the left and right
// edges, no flow elsewhere.
struct SteadyAquifer {
  Grid grid;
  std::vector<double> k;  // per-site conductivity
  double h_left{0.0}, h_right{0.0};
  std::vector<double> source;  // per-site recharge; empty means none
  LSchemeConfig cfg;
};

inline FlowSolution solve_steady_aquifer(const SteadyAquifer& a) {
  const Grid& g = a.grid;
  FlowProblem<SaturatedLaw> fp;
  fp.grid = g;
  fp.law = SaturatedLaw{1.0, 1.0};
  fp.k_scale = a.k;
  fp.gravity = false;
  fp.stationary = true;
  const double hl = a.h_left, hr = a.h_right;
  fp.boundary = [hl, hr](const BoundaryNode& b, double) {
    if (b.left) return BoundaryCondition::dirichlet(hl);
    if (b.right) return BoundaryCondition::dirichlet(hr);
    return BoundaryCondition::no_flow();
  };
  const double lx = g.x(g.nx - 1) - g.x0;
  fp.psi0 = sample(g, [&](double x, double) { return hl + (hr - hl) * (x - g.x0) / lx; });
  if (!a.source.empty()) {
    const auto src = a.source;
    fp.source = [src, g](double x, double z, double) {
      const auto i = static_cast<std::size_t>(std::lround((x - g.x0) / g.dx));
      const auto j = static_cast<std::size_t>(std::lround((z - g.z0) / g.dz));
      return src[g.index(i, j)];
    };
  }
  return solve_flow(fp, a.cfg);
}

// ---------------------------------------------------------------------------
// Scaled versus unscaled steady solve
// ---------------------------------------------------------------------------

inline RunResult run_regional_flow(const RunContext& ctx) {
  const Params& p = ctx.params;
  const double lambda = p.num("corr-len");
  const double lx = p.num("length-x"), ly = p.num("length-y");
  const double h = lambda / p.num("cells-per-corr");
  RandomFieldSpec spec;
  spec.mean = p.num("k-mean");
  spec.variance = p.num("k-variance");
  spec.model = parse_correlation(p.str("correlation"));
  spec.n_modes = p.count("modes");
  spec.seed = ctx.seed;
  LSchemeConfig cfg;
  cfg.l_param = 1.0;
  cfg.eps_a = 0.0;
  cfg.eps_r = p.num("eps-r");
  cfg.r_max = p.num("r-max");
  cfg.max_iters = p.count("max-iters");
  cfg.stop_on_stall = false;

  auto solve = [&](double scale) {
    SteadyAquifer a;
    a.grid = plane_grid(lx / scale, ly / scale, h / scale, h / scale);
    RandomFieldSpec s = spec;
    s.corr_len_x = s.corr_len_z = lambda / scale;
    a.k = kraichnan_lognormal(s, a.grid).values;
    a.h_left = p.num("head-left") / scale;
    a.h_right = p.num("head-right") / scale;
    a.cfg = cfg;
    return std::pair<Grid, FlowSolution>{a.grid, solve_steady_aquifer(a)};
  };
  std::pair<Grid, FlowSolution> plain, scaled;
  parallel_for(2, ctx.jobs, [&](std::size_t k) {
    if (k == 0)
      plain = solve(1.0);
    else
      scaled = solve(lambda);
  });
  std::vector<double> back(scaled.second.psi.size());
  for (std::size_t s = 0; s < back.size(); ++s) back[s] = lambda * scaled.second.psi[s];
  RunResult r;
  r.converged = plain.second.converged && scaled.second.converged;
  r.results["relative_difference"] = relative_l2(back, plain.second.psi);
  r.results["iterations_unscaled"] = plain.second.total_iterations;
  r.results["iterations_scaled"] = scaled.second.total_iterations;
  r.results["final_correction_unscaled"] = plain.second.final_correction;
  r.results["final_correction_scaled"] = scaled.second.final_correction * lambda;
  r.results["grid"] = {{"nx", plain.first.nx}, {"ny", plain.first.nz}, {"dx", h}};
  r.fields.push_back({"head", plain.first, {{"h", plain.second.psi}, {"h_from_scaled", back}}});
  return r;
}

inline std::vector<ParamSpec> regional_flow_params() {
  return {
      {"length-x", "4900", "4900", "aquifer length [m]"},
      {"length-y", "5000", "5000", "aquifer width [m]"},
      {"head-left", "0", "0", "head at x = 0 [m]"},
      {"head-right", "5", "5", "head at x = length-x [m]"},
      {"k-mean", "12e-4", "12e-4", "mean conductivity [m/s]"},
      {"k-variance", "0.1", "0.1", "variance of log conductivity"},
      {"corr-len", "500", "500", "correlation length [m]"},
      {"correlation", "exponential", "exponential", "exponential|gaussian"},
      {"modes", "100", "100", "Kraichnan modes"},
      {"cells-per-corr", "5", "5", "grid cells per correlation length"},
      {"r-max", "0.25", "0.25", "jump probability per direction at max K"},
      {"eps-r", "1e-12", "1e-12", "relative tolerance"},
      {"max-iters", "100000", "400000", "iteration budget"},
  };
}

// ---------------------------------------------------------------------------
// Random recharge: Monte Carlo head statistics
// ---------------------------------------------------------------------------

inline RunResult run_regional_recharge(const RunContext& ctx) {
  const Params& p = ctx.params;
  const double lambda = p.num("corr-len");
  const double lx = p.num("length-x"), ly = p.num("length-y");
  const double h = lambda / p.num("cells-per-corr");
  const std::size_t nreal = p.count("realizations");
  const double seconds_per_year = 365.25 * 86400.0;
  const double f_mean = p.num("recharge-mean") * 1e-3 / seconds_per_year;  // mm/yr to m/s
  RandomFieldSpec spec;
  spec.mean = f_mean * lambda;  // source of the problem in units of lambda
  spec.variance = p.num("recharge-variance");
  spec.model = parse_correlation(p.str("correlation"));
  spec.n_modes = p.count("modes");
  spec.seed = ctx.seed;
  spec.corr_len_x = spec.corr_len_z = 1.0;
  const Grid g = plane_grid(lx / lambda, ly / lambda, h / lambda, h / lambda);
  LSchemeConfig cfg;
  cfg.l_param = 1.0;
  cfg.eps_a = p.num("eps-a") / lambda;
  cfg.eps_r = p.num("eps-r");
  cfg.r_max = p.num("r-max");
  cfg.max_iters = p.count("max-iters");
  cfg.stop_on_stall = false;

  std::vector<std::vector<double>> heads(nreal);
  std::vector<std::size_t> its(nreal), unconv(nreal);
  parallel_for(nreal, ctx.jobs, [&](std::size_t rz) {
    SteadyAquifer a;
    a.grid = g;
    a.k.assign(g.size(), p.num("k"));
    a.source = kraichnan_lognormal(spec, g, rz).values;
    a.h_left = p.num("head-left") / lambda;
    a.h_right = p.num("head-right") / lambda;
    a.cfg = cfg;
    const FlowSolution s = solve_steady_aquifer(a);
    heads[rz] = s.psi;
    for (auto& v : heads[rz]) v *= lambda;
    its[rz] = s.total_iterations;
    unconv[rz] = s.unconverged_steps;
  });
  const McStats st = mc_stats(heads);
  const std::size_t centre = g.index(g.nx / 2, g.nz / 2);
  RunResult r;
  std::size_t bad = 0;
  for (auto u : unconv) bad += u;
  r.converged = bad == 0;
  r.results["realizations"] = nreal;
  r.results["unconverged_realizations"] = bad;
  r.results["mean_spatial_average"] = st.spatial_mean;
  r.results["mean_spatial_std"] = st.spatial_mean_std;
  r.results["variance_spatial_average"] = st.spatial_variance;
  r.results["variance_spatial_std"] = st.spatial_variance_std;
  r.results["mean_centre"] = st.mean[centre];
  r.results["variance_centre"] = st.variance[centre];
  r.results["centre"] = {{"x", g.x(g.nx / 2) * lambda}, {"y", g.z(g.nz / 2) * lambda}};
  r.results["recharge_mean_m_per_s"] = f_mean;
  std::size_t tot = 0, mx = 0;
  for (auto i : its) {
    tot += i;
    mx = std::max(mx, i);
  }
  r.results["mean_iterations"] = static_cast<double>(tot) / static_cast<double>(std::max<std::size_t>(1, nreal));
  r.results["max_iterations"] = mx;
  Grid gm = Grid::plane(g.nx, g.nz, h, h);
  r.fields.push_back({"statistics", gm, {{"mean", st.mean}, {"variance", st.variance}}});
  return r;
}

inline std::vector<ParamSpec> regional_recharge_params() {
  return {
      {"length-x", "4900", "4900", "aquifer length [m]"},
      {"length-y", "5000", "5000", "aquifer width [m]"},
      {"head-left", "0", "0", "head at x = 0 [m]"},
      {"head-right", "5", "5", "head at x = length-x [m]"},
      {"k", "12e-4", "12e-4", "conductivity [m/s]"},
      {"recharge-mean", "362.912", "362.912", "mean recharge [mm/yr]"},
      {"recharge-variance", "1", "1", "variance of log recharge"},
      {"corr-len", "500", "500", "correlation length [m]"},
      {"correlation", "exponential", "exponential", "exponential|gaussian"},
      {"modes", "100", "100", "Kraichnan modes"},
      {"cells-per-corr", "5", "5", "grid cells per correlation length"},
      {"realizations", "100", "100", "Monte Carlo realizations"},
      {"r-max", "0.25", "0.25", "jump probability per direction"},
      {"eps-a", "1e-9", "1e-9", "absolute tolerance on the head correction [m]"},
      {"eps-r", "0", "0", "relative tolerance"},
      {"max-iters", "100000", "400000", "iteration budget per realization"},
  };
}

// ---------------------------------------------------------------------------
// Plume dispersion: full flow ensemble against first-order velocities
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Snapshot> ugrw_plume(const VelocityField& vel, double dcoef, double dt, double t_end,
                                        std::size_t site) {
  const Grid& g = vel.grid;
  const int d = choose_jump_amplitude(dcoef, dcoef, dt, g);
  const UgrwParams up = make_ugrw_params(vel, dcoef, dcoef, dt, d);
  std::vector<double> n(g.size(), 0.0);
  n[site] = 1.0;
  std::vector<Snapshot> out{{0.0, n}};
  const auto steps = static_cast<std::size_t>(std::lround(t_end / dt));
  const auto per_output = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(1.0 / dt)));
  for (std::size_t k = 1; k <= steps; ++k) {
    n = ugrw_step(n, g, up);
    if (k % per_output == 0) out.push_back({static_cast<double>(k) * dt, n});
  }
  return out;
}

}  // namespace detail

inline RunResult run_aquifer_dispersion(const RunContext& ctx) {
  const Params& p = ctx.params;
  const double h = p.num("dx");
  const Grid g = plane_grid(p.num("length-x"), p.num("length-y"), h, h);
  const double hl = p.num("head-left"), hr = p.num("head-right");
  const double gradient = (hl - hr) / p.num("length-x");
  RandomFieldSpec spec;
  spec.mean = p.num("k-mean");
  spec.variance = p.num("k-variance");
  spec.corr_len_x = spec.corr_len_z = p.num("corr-len");
  spec.model = CorrelationModel::Gaussian;
  spec.n_modes = p.count("modes");
  spec.seed = ctx.seed;
  const double dcoef = p.num("diffusion"), dt = p.num("dt"), t_end = p.num("t-end");
  const std::size_t site = g.index(static_cast<std::size_t>(std::lround(p.num("x-inject") / h)),
                                   static_cast<std::size_t>(std::lround(p.num("y-inject") / h)));
  const std::size_t nfull = p.count("realizations"), nfo = p.count("firstorder-realizations");
  LSchemeConfig cfg;
  cfg.l_param = 1.0;
  cfg.eps_a = p.num("eps-a");
  cfg.eps_r = 0.0;
  cfg.r_max = p.num("r-max");
  cfg.max_iters = p.count("max-iters");
  cfg.stop_on_stall = false;

  std::vector<std::vector<Snapshot>> full(nfull), fo(nfo);
  std::vector<std::size_t> unconv(nfull, 0);
  parallel_for(nfull + nfo, ctx.jobs, [&](std::size_t k) {
    if (k < nfull) {
      SteadyAquifer a;
      a.grid = g;
      a.k = kraichnan_lognormal(spec, g, k).values;
      a.h_left = hl;
      a.h_right = hr;
      a.cfg = cfg;
      const FlowSolution s = solve_steady_aquifer(a);
      unconv[k] = s.unconverged_steps;
      const VelocityField vel = darcy_velocity(g, s.psi, s.k, VelocityBoundaryMode::ForwardDifference, {}, 0.0, false);
      full[k] = detail::ugrw_plume(vel, dcoef, dt, t_end, site);
    } else {
      RandomFieldSpec s1 = spec;
      s1.n_modes = p.count("firstorder-modes");
      const double u_mean = std::exp(spec.log_mean()) * gradient;
      const std::size_t key = 1000000 + (k - nfull);
      const VelocityField vel = kraichnan_velocity_firstorder(s1, u_mean, g, key);
      fo[k - nfull] = detail::ugrw_plume(vel, dcoef, dt, t_end, site);
    }
  });
  const DispersionSeries df = ensemble_dispersion(g, full), dr = ensemble_dispersion(g, fo);
  RunResult r;
  std::size_t bad = 0;
  for (auto u : unconv) bad += u;
  r.converged = bad == 0;
  Series s{"dispersion", {"t", "d_x_full", "d_y_full", "d_x_firstorder", "d_y_firstorder", "s_x_full", "s_y_full"}, {}};
  for (std::size_t k = 0; k < df.t.size(); ++k)
    s.add({df.t[k], df.d_x[k], df.d_z[k], dr.d_x[k], dr.d_z[k], df.s_x[k], df.s_z[k]});
  r.series.push_back(std::move(s));
  const double dxf = df.d_x.back(), dyf = df.d_z.back(), dxr = dr.d_x.back(), dyr = dr.d_z.back();
  r.results["t_final"] = df.t.back();
  r.results["d_x_full"] = dxf;
  r.results["d_y_full"] = dyf;
  r.results["d_x_firstorder"] = dxr;
  r.results["d_y_firstorder"] = dyr;
  r.results["rel_diff_x"] = (dxf - dxr) / dxr;
  r.results["rel_diff_y"] = (dyf - dyr) / dyr;
  r.results["mean_velocity_firstorder"] = std::exp(spec.log_mean()) * gradient;
  r.results["unconverged_flow_solves"] = bad;
  r.results["realizations"] = nfull;
  r.results["firstorder_realizations"] = nfo;
  return r;
}

inline std::vector<ParamSpec> aquifer_dispersion_params() {
  return {
      {"length-x", "20", "20", "aquifer length"},
      {"length-y", "10", "10", "aquifer width"},
      {"dx", "0.2", "0.1", "grid spacing"},
      {"head-left", "1", "1", "head at x = 0"},
      {"head-right", "0", "0", "head at x = length-x"},
      {"k-mean", "15", "15", "arithmetic mean conductivity"},
      {"k-variance", "0.1", "0.1", "variance of log conductivity"},
      {"corr-len", "1", "1", "correlation length"},
      {"modes", "10", "10", "Kraichnan modes of the conductivity"},
      {"firstorder-modes", "100", "100", "Kraichnan modes of the first-order velocity"},
      {"realizations", "100", "100", "full-flow realizations"},
      {"firstorder-realizations", "500", "10000", "first-order realizations"},
      {"diffusion", "0.01", "0.01", "local diffusion coefficient"},
      {"dt", "0.5", "0.5", "transport time step"},
      {"t-end", "10", "10", "final time"},
      {"x-inject", "2", "2", "injection point x"},
      {"y-inject", "5", "5", "injection point y"},
      {"r-max", "0.25", "0.25", "jump probability per direction for the steady solve"},
      {"eps-a", "5e-7", "5e-7", "absolute tolerance of the steady solve"},
      {"max-iters", "1000000", "1000000", "iteration budget of the steady solve"},
  };
}

}  // namespace grw::bench
