#pragma once

// One-dimensional Richards scenarios: infiltration in a layered column,
// lysimeter drainage, constant-head infiltration front positions and the
// constant-flux Theta-form problem.

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "grw/analysis.hpp"
#include "grw/bench/common.hpp"
#include "grw/constitutive.hpp"
#include "grw/flow.hpp"

namespace grw::bench {

// Node fluxes as the mean of the adjacent face fluxes -K_half (dpsi/dz + 1),
// K_half the arithmetic mean. A steady column gives the same value everywhere.
inline std::vector<double> face_averaged_flux(const Grid& g, const std::vector<double>& psi,
                                              const std::vector<double>& k) {
  require(g.nx == 1 && g.nz >= 2, "face_averaged_flux: column expected");
  const std::size_t n = g.nz;
  std::vector<double> face(n - 1), q(n);
  for (std::size_t j = 0; j + 1 < n; ++j)
    face[j] = -0.5 * (k[j] + k[j + 1]) * ((psi[j + 1] - psi[j]) / g.dz + 1.0);
  q[0] = face[0];
  q[n - 1] = face[n - 2];
  for (std::size_t j = 1; j + 1 < n; ++j) q[j] = 0.5 * (face[j - 1] + face[j]);
  return q;
}

// Column water storage by the trapezoidal rule.
inline double column_storage(const Grid& g, const std::vector<double>& theta) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < g.nz; ++j) s += 0.5 * (theta[j] + theta[j + 1]) * g.dz;
  return s;
}

namespace detail {

struct ProfileCompare {
  double eps_psi{NAN}, eps_theta{NAN}, eps_q{NAN};
  bool available{false};
};

inline ProfileCompare compare_profile(const std::filesystem::path& file, const std::vector<double>& z,
                                      const std::vector<double>& psi, const std::vector<double>& theta,
                                      const std::vector<double>& q) {
  ProfileCompare c;
  if (!std::filesystem::exists(file)) return c;
  const Table t = read_table(file);
  const auto zr = t.column("z"), pr = t.column("psi"), thr = t.column("theta"), qr = t.column("q");
  std::vector<double> p_ref, th_ref, q_ref;
  for (double zz : z) {
    p_ref.push_back(interp_linear(zr, pr, zz));
    th_ref.push_back(interp_linear(zr, thr, zz));
    q_ref.push_back(interp_linear(zr, qr, zz));
  }
  c.eps_psi = relative_l2(psi, p_ref);
  c.eps_theta = relative_l2(theta, th_ref);
  c.eps_q = relative_l2(q, q_ref);
  c.available = true;
  return c;
}

inline Json compare_json(const ProfileCompare& c) {
  if (!c.available) return nullptr;
  return Json{{"eps_psi", c.eps_psi}, {"eps_theta", c.eps_theta}, {"eps_q", c.eps_q}};
}

inline Json history_orders(const std::vector<double>& h) {
  Json j;
  if (h.size() < 4) return nullptr;
  j["length"] = h.size();
  j["q"] = comp_order_q(h);
  j["q1"] = comp_order_qq(h, 1.0);
  try {
    j["loglog_slope"] = loglog_decay_slope(h);
  } catch (const std::exception&) {
    j["loglog_slope"] = nullptr;
  }
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Layered column with a ramped surface flux
// ---------------------------------------------------------------------------

struct Scenario1dSetup {
  Grid grid;
  ExponentialLaw law;
  std::vector<double> k_scale;
  double psi_bottom{0.5};
  double q0{0.0}, q1{0.0}, t_ramp{0.0};

  double flux(double t) const { return t >= t_ramp ? q1 : q0 + (q1 - q0) * t / t_ramp; }
};

inline Scenario1dSetup scenario1d_setup(const Params& p) {
  Scenario1dSetup s;
  s.grid = column_grid(p.num("depth"), p.num("dz"));
  s.law.p.k_sat = p.num("k-sat");
  s.law.p.theta_res = p.num("theta-res");
  s.law.p.theta_sat = p.num("theta-sat");
  s.law.p.alpha = p.num("alpha");
  s.law.p.validate();
  const std::string c = p.choice("case", {"homogeneous", "heterogeneous"});
  s.k_scale.assign(s.grid.size(), 1.0);
  if (c == "heterogeneous")
    for (std::size_t j = 0; j < s.grid.nz; ++j)
      if (s.grid.z(j) >= p.num("layer-z") - 1e-12) s.k_scale[j] = p.num("k-contrast");
  s.psi_bottom = p.num("psi-bottom");
  s.q0 = p.num("q0");
  s.q1 = p.num("q1");
  s.t_ramp = p.num("t-ramp");
  return s;
}

inline RunResult run_scenario1d(const RunContext& ctx) {
  const Params& p = ctx.params;
  const Scenario1dSetup S = scenario1d_setup(p);
  const Grid& g = S.grid;
  const std::string which = p.str("case");
  RunResult r;

  // Stationary state for the initial flux.
  FlowProblem<ExponentialLaw> st;
  st.grid = g;
  st.law = S.law;
  st.k_scale = S.k_scale;
  const double psi_b = S.psi_bottom, q0 = S.q0;
  st.boundary = [psi_b, q0](const BoundaryNode& b, double) {
    return b.bottom ? BoundaryCondition::dirichlet(psi_b) : BoundaryCondition::flux(q0);
  };
  st.psi0 = sample(g, [&](double, double z) { return psi_b - z; });
  st.stationary = true;
  LSchemeConfig cs;
  cs.l_param = p.num("l-stationary");
  cs.eps_a = p.num("eps-a");
  cs.eps_r = p.num("eps-r");
  cs.r_max = p.num("r-max");
  cs.max_iters = p.count("max-iters-stationary");
  cs.record_history = true;
  cs.stop_on_stall = false;
  const FlowSolution s0 = solve_flow(st, cs);
  if (!s0.converged) r.converged = false;

  // Transient run from the stationary state.
  FlowProblem<ExponentialLaw> tr = st;
  tr.stationary = false;
  tr.psi0 = s0.psi;
  tr.t_end = p.num("t-end");
  tr.dt.checkpoints = {S.t_ramp};
  tr.boundary = [S](const BoundaryNode& b, double t) {
    return b.bottom ? BoundaryCondition::dirichlet(S.psi_bottom) : BoundaryCondition::flux(S.flux(t));
  };
  LSchemeConfig ct = cs;
  ct.l_param = p.num("l-transient");
  ct.max_iters = p.count("max-iters");
  ct.record_history = true;
  const FlowSolution s1 = solve_flow(tr, ct);
  if (!s1.converged) r.converged = false;

  std::vector<double> z(g.nz);
  for (std::size_t j = 0; j < g.nz; ++j) z[j] = g.z(j);
  auto theta_of = [&](const std::vector<double>& psi) {
    std::vector<double> th(psi.size());
    for (std::size_t s = 0; s < psi.size(); ++s) th[s] = S.law.theta(psi[s]);
    return th;
  };
  const auto th0 = theta_of(s0.psi), th1 = theta_of(s1.psi);
  const auto q_init = face_averaged_flux(g, s0.psi, s0.k), q_fin = face_averaged_flux(g, s1.psi, s1.k);

  std::size_t max_it = 0;
  for (auto it : s1.iterations) max_it = std::max(max_it, it);
  const double steps = static_cast<double>(s1.iterations.size());
  r.results["case"] = which;
  r.results["stationary_iterations"] = s0.total_iterations;
  r.results["transient_steps"] = s1.iterations.size();
  r.results["transient_iterations"] = s1.total_iterations;
  r.results["cumulative_iterations"] = s0.total_iterations + s1.total_iterations;
  r.results["mean_iterations_per_step"] = steps > 0 ? static_cast<double>(s1.total_iterations) / steps : 0.0;
  r.results["max_iterations_per_step"] = max_it;
  r.results["unconverged_steps"] = s0.unconverged_steps + s1.unconverged_steps;
  r.results["stationary_orders"] = detail::history_orders(s0.histories.empty() ? std::vector<double>{} : s0.histories[0]);
  std::size_t longest = 0;
  for (std::size_t k = 0; k < s1.histories.size(); ++k)
    if (s1.histories[k].size() > s1.histories[longest].size()) longest = k;
  r.results["transient_longest_step_orders"] =
      s1.histories.empty() ? Json(nullptr) : detail::history_orders(s1.histories[longest]);

  if (!ctx.fixture_dir.empty()) {
    const std::filesystem::path dir = std::filesystem::path(ctx.fixture_dir) / "scenario1d";
    r.results["compare_initial"] =
        detail::compare_json(detail::compare_profile(dir / (which + "_initial.csv"), z, s0.psi, th0, q_init));
    r.results["compare_final"] =
        detail::compare_json(detail::compare_profile(dir / (which + "_final.csv"), z, s1.psi, th1, q_fin));
  }

  Series prof{"profiles", {"z", "psi_initial", "theta_initial", "q_initial", "psi_final", "theta_final", "q_final"}, {}};
  for (std::size_t j = 0; j < g.nz; ++j) prof.add({z[j], s0.psi[j], th0[j], q_init[j], s1.psi[j], th1[j], q_fin[j]});
  r.series.push_back(std::move(prof));
  Series steps_s{"steps", {"t", "dt", "iterations"}, {}};
  for (std::size_t k = 0; k < s1.times.size(); ++k)
    steps_s.add({s1.times[k], s1.dts[k], static_cast<double>(s1.iterations[k])});
  r.series.push_back(std::move(steps_s));
  if (!s0.histories.empty()) {
    Series h{"stationary_history", {"iteration", "correction"}, {}};
    for (std::size_t k = 0; k < s0.histories[0].size(); ++k) h.add({static_cast<double>(k + 1), s0.histories[0][k]});
    r.series.push_back(std::move(h));
  }
  r.fields.push_back({"final", g, {{"psi", s1.psi}, {"theta", th1}, {"q", q_fin}}});
  return r;
}

inline std::vector<ParamSpec> scenario1d_params() {
  return {
      {"case", "homogeneous", "homogeneous", "homogeneous|heterogeneous"},
      {"depth", "2", "2", "column height [m]"},
      {"dz", "0.01", "0.01", "node spacing [m]"},
      {"k-sat", "2.77e-6", "2.77e-6", "saturated conductivity [m/s]"},
      {"theta-res", "0.06", "0.06", "residual water content"},
      {"theta-sat", "0.36", "0.36", "saturated water content"},
      {"alpha", "10", "10", "exponential model parameter [1/m]"},
      {"layer-z", "1", "1", "height above which conductivity is scaled (heterogeneous case)"},
      {"k-contrast", "500", "500", "conductivity factor of the upper layer"},
      {"psi-bottom", "0.5", "0.5", "bottom pressure head [m]"},
      {"q0", "2.77e-7", "2.77e-7", "initial inward surface flux [m/s]"},
      {"q1", "2.5e-6", "2.5e-6", "final inward surface flux [m/s]"},
      {"t-ramp", "100", "100", "duration of the linear flux ramp [s]"},
      {"t-end", "1e4", "1e4", "final time [s]"},
      {"l-stationary", "1", "1", "L for the stationary solve"},
      {"l-transient", "2", "2", "L for the transient solve"},
      {"eps-a", "0", "0", "absolute tolerance"},
      {"eps-r", "1e-9", "1e-9", "relative tolerance"},
      {"r-max", "0.2", "0.2", "jump probability per direction at max K"},
      {"max-iters", "1000000", "1000000", "iteration budget per time step"},
      {"max-iters-stationary", "20000000", "20000000", "iteration budget of the stationary solve"},
  };
}

// ---------------------------------------------------------------------------
// Lysimeter drainage under free drainage
// ---------------------------------------------------------------------------

inline RunResult run_drainage_lysimeter(const RunContext& ctx) {
  const Params& p = ctx.params;
  VanGenuchtenLaw law;
  law.p.theta_res = p.num("theta-res");
  law.p.theta_sat = p.num("theta-sat");
  law.p.k_sat = p.num("k-sat");
  law.p.alpha = p.num("alpha");
  law.p.n = p.num("n");
  law.p.validate();
  const Grid g = column_grid(p.num("depth"), p.num("dz"));
  FlowProblem<VanGenuchtenLaw> fp;
  fp.grid = g;
  fp.law = law;
  fp.boundary = [](const BoundaryNode& b, double) {
    return b.bottom ? BoundaryCondition::free_drainage() : BoundaryCondition::no_flow();
  };
  fp.psi0.assign(g.size(), p.num("psi-initial"));
  fp.t_end = p.num("t-end");
  for (const auto& t : {1.0, 5.0, 10.0, 30.0, 100.0})
    if (t <= fp.t_end) fp.output_times.push_back(t);
  LSchemeConfig c;
  c.l_param = p.num("l-param");
  c.eps_a = p.num("eps-a");
  c.eps_r = p.num("eps-r");
  c.r_max = p.num("r-max");
  c.max_iters = p.count("max-iters");
  const FlowSolution s = solve_flow(fp, c);
  RunResult r;
  r.converged = s.converged;
  auto theta_of = [&](const std::vector<double>& psi) {
    std::vector<double> th(psi.size());
    for (std::size_t k = 0; k < psi.size(); ++k) th[k] = law.theta(psi[k]);
    return th;
  };
  const double s0 = column_storage(g, theta_of(fp.psi0));
  Series out{"outflow", {"t", "storage", "cumulative_outflow"}, {}};
  Series prof{"profiles", {"z"}, {}};
  for (const auto& snap : s.snapshots) prof.columns.push_back("theta_t" + std::to_string(static_cast<int>(snap.t)));
  std::vector<std::vector<double>> ths;
  Json snaps = Json::array();
  for (const auto& snap : s.snapshots) {
    const auto th = theta_of(snap.values);
    const double st = column_storage(g, th);
    out.add({snap.t, st, s0 - st});
    snaps.push_back({{"t", snap.t}, {"storage", st}, {"cumulative_outflow", s0 - st}, {"theta_top", th.back()}});
    ths.push_back(th);
  }
  for (std::size_t j = 0; j < g.nz; ++j) {
    std::vector<double> row{g.z(j)};
    for (const auto& th : ths) row.push_back(th[j]);
    prof.add(std::move(row));
  }
  r.results["initial_storage"] = s0;
  r.results["outputs"] = snaps;
  r.results["steps"] = s.iterations.size();
  r.results["total_iterations"] = s.total_iterations;
  r.results["unconverged_steps"] = s.unconverged_steps;
  r.series.push_back(std::move(out));
  r.series.push_back(std::move(prof));
  r.fields.push_back({"final", g, {{"psi", s.psi}, {"theta", s.theta}}});
  return r;
}

inline std::vector<ParamSpec> drainage_lysimeter_params() {
  return {
      {"depth", "600", "600", "column height [cm]"},
      {"dz", "10", "10", "node spacing [cm]"},
      {"theta-res", "0", "0", "residual water content"},
      {"theta-sat", "0.331", "0.331", "saturated water content"},
      {"k-sat", "25", "25", "saturated conductivity [cm/d]"},
      {"alpha", "0.0143", "0.0143", "van Genuchten alpha [1/cm]"},
      {"n", "1.5", "1.5", "van Genuchten n"},
      {"psi-initial", "0", "0", "initial pressure head [cm]"},
      {"t-end", "100", "100", "final time [d]"},
      {"l-param", "0.5", "0.5", "L-scheme constant"},
      {"eps-a", "5e-6", "5e-6", "absolute tolerance"},
      {"eps-r", "5e-6", "5e-6", "relative tolerance"},
      {"r-max", "0.005", "0.005", "jump probability at max K"},
      {"max-iters", "1000000", "1000000", "iteration budget per step"},
  };
}

// ---------------------------------------------------------------------------
// Constant-head infiltration: wetting front depths
// ---------------------------------------------------------------------------

// Depth below the surface at which theta first falls to `value`, scanning
// from the top node downwards. NaN if the profile never reaches it.
inline double front_depth(const Grid& g, const std::vector<double>& theta, double value) {
  const double top = g.z(g.nz - 1);
  for (std::size_t j = g.nz - 1; j > 0; --j) {
    const double a = theta[j], b = theta[j - 1];
    if (a >= value && b < value) {
      const double w = (a - value) / (a - b);
      return top - (g.z(j) - w * g.dz);
    }
  }
  return std::nan("");
}

inline std::vector<double> warrick_output_times() { return {0.5, 1.0, 1.5, 2.0}; }
inline std::vector<double> warrick_theta_levels() { return {0.24, 0.31, 0.38}; }

inline RunResult run_warrick(const RunContext& ctx) {
  const Params& p = ctx.params;
  VanGenuchtenLaw law;
  law.p.theta_res = p.num("theta-res");
  law.p.theta_sat = p.num("theta-sat");
  law.p.k_sat = p.num("k-sat");
  law.p.alpha = p.num("alpha");
  law.p.n = p.num("n");
  law.p.validate();
  const Grid g = column_grid(p.num("depth"), p.num("dz"));
  const double psi_i = psi_vgm(p.num("theta-initial"), law.p);
  const double psi_top = p.num("psi-top");
  FlowProblem<VanGenuchtenLaw> fp;
  fp.grid = g;
  fp.law = law;
  fp.boundary = [psi_top](const BoundaryNode& b, double) {
    return b.top ? BoundaryCondition::dirichlet(psi_top) : BoundaryCondition::no_flow();
  };
  fp.psi0.assign(g.size(), psi_i);
  fp.t_end = p.num("t-end");
  for (double t : warrick_output_times())
    if (t <= fp.t_end + 1e-12) fp.output_times.push_back(t);
  LSchemeConfig c;
  c.l_param = p.num("l-param");
  c.eps_a = p.num("eps-a");
  c.eps_r = p.num("eps-r");
  c.r_max = p.num("r-max");
  c.max_iters = p.count("max-iters");
  const FlowSolution s = solve_flow(fp, c);
  RunResult r;
  r.converged = s.converged;

  Table ref;
  bool have_ref = false;
  if (!ctx.fixture_dir.empty()) {
    const auto f = std::filesystem::path(ctx.fixture_dir) / "warrick" / "reference_depths.csv";
    if (std::filesystem::exists(f)) {
      ref = read_table(f);
      have_ref = true;
    }
  }
  auto ref_depth = [&](double t, double th) {
    const std::size_t it = ref.index_of("t"), ith = ref.index_of("theta"), id = ref.index_of("depth");
    for (const auto& row : ref.rows)
      if (std::abs(row[it] - t) < 1e-9 && std::abs(row[ith] - th) < 1e-9) return row[id];
    return std::nan("");
  };

  Series dep{"front_depths", {"t", "theta", "depth", "reference_depth", "relative_error"}, {}};
  Json cells = Json::array();
  double worst = 0.0;
  bool all_found = true;
  for (const auto& snap : s.snapshots) {
    std::vector<double> th(snap.values.size());
    for (std::size_t k = 0; k < th.size(); ++k) th[k] = law.theta(snap.values[k]);
    for (double lv : warrick_theta_levels()) {
      const double d = front_depth(g, th, lv);
      const double dr = have_ref ? ref_depth(snap.t, lv) : std::nan("");
      const double e = std::isfinite(dr) && dr > 0 ? (d - dr) / dr : std::nan("");
      if (std::isfinite(e))
        worst = std::max(worst, std::abs(e));
      else
        all_found = false;
      dep.add({snap.t, lv, d, dr, e});
      cells.push_back({{"t", snap.t}, {"theta", lv}, {"depth", std::isfinite(d) ? Json(d) : Json(nullptr)},
                       {"reference_depth", std::isfinite(dr) ? Json(dr) : Json(nullptr)},
                       {"relative_error", std::isfinite(e) ? Json(e) : Json(nullptr)}});
    }
  }
  r.results["psi_initial"] = psi_i;
  r.results["cells"] = cells;
  r.results["reference_available"] = have_ref;
  r.results["max_abs_relative_error"] = have_ref && all_found ? Json(worst) : Json(nullptr);
  r.results["steps"] = s.iterations.size();
  r.results["total_iterations"] = s.total_iterations;
  r.series.push_back(std::move(dep));
  r.fields.push_back({"final", g, {{"psi", s.psi}, {"theta", s.theta}}});
  return r;
}

inline std::vector<ParamSpec> warrick_params() {
  return {
      {"depth", "100", "100", "column height [cm]"},
      {"dz", "1", "1", "node spacing [cm]"},
      {"theta-res", "0.1", "0.1", "residual water content"},
      {"theta-sat", "0.45", "0.45", "saturated water content"},
      {"k-sat", "2.16", "2.16", "saturated conductivity [cm/h]"},
      {"alpha", "0.01", "0.01", "van Genuchten alpha [1/cm]"},
      {"n", "1.5", "1.5", "van Genuchten n"},
      {"theta-initial", "0.17", "0.17", "initial water content"},
      {"psi-top", "0", "0", "surface pressure head [cm]"},
      {"t-end", "2", "2", "final time [h]"},
      {"l-param", "0.002", "0.002", "L-scheme constant [1/cm], about twice the largest retention slope"},
      {"eps-a", "5e-6", "5e-6", "absolute tolerance"},
      {"eps-r", "5e-6", "5e-6", "relative tolerance"},
      {"r-max", "0.4", "0.4", "jump probability at max K"},
      {"max-iters", "1000000", "1000000", "iteration budget per step"},
  };
}

// ---------------------------------------------------------------------------
// Constant-flux infiltration in Theta form
// ---------------------------------------------------------------------------

inline std::vector<double> sander_depths() { return {0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 2.0}; }

inline RunResult run_sander(const RunContext& ctx) {
  const Params& p = ctx.params;
  FujitaParams fj{p.num("d0"), p.num("v")};
  fj.validate();
  const double theta_r = p.num("theta-res"), theta_s = p.num("theta-sat");
  ThetaFormProblem tp;
  tp.grid = Grid::column(nodes_for(p.num("depth"), p.num("dz")), p.num("dz"), 0.0, ZAxis::Down);
  tp.diffusivity = [fj](double th) { return fujita_diffusivity(th, fj); };
  const double drift = p.num("drift");
  if (drift != 0.0) tp.drift = [drift](double) { return drift; };
  tp.top_flux = p.num("flux");
  tp.theta0.assign(tp.grid.size(), p.num("big-theta-initial"));
  tp.t_end = p.num("t-end");
  tp.r_max = p.num("r-max");
  const ThetaFormSolution s = solve_theta_form(tp);
  RunResult r;
  std::vector<double> th(s.big_theta.size()), depth(s.big_theta.size());
  for (std::size_t k = 0; k < th.size(); ++k) {
    th[k] = theta_r + (theta_s - theta_r) * s.big_theta[k];
    depth[k] = tp.grid.z(k);
  }
  Series tab{"table", {"depth", "theta"}, {}};
  Json rows = Json::array();
  for (double d : sander_depths()) {
    const double v = interp_linear(depth, th, d);
    tab.add({d, v});
    rows.push_back({{"depth", d}, {"theta", v}});
  }
  r.results["theta_surface"] = th.front();
  r.results["table"] = rows;
  r.results["steps"] = s.steps;
  r.results["boundary_theta"] = th.back();
  r.series.push_back(std::move(tab));
  Series prof{"profile", {"depth", "big_theta", "theta"}, {}};
  for (std::size_t k = 0; k < th.size(); ++k) prof.add({depth[k], s.big_theta[k], th[k]});
  r.series.push_back(std::move(prof));
  return r;
}

inline std::vector<ParamSpec> sander_params() {
  return {
      {"d0", "2.75862", "2.75862", "Fujita D0"},
      {"v", "0.85", "0.85", "Fujita nonlinearity"},
      {"flux", "0.2759", "0.2759", "normalized surface influx"},
      {"t-end", "0.3625", "0.3625", "final time"},
      {"dz", "0.01", "0.01", "node spacing"},
      {"depth", "6", "6", "column depth"},
      {"r-max", "1", "1", "cap on 2 dt D / dz^2"},
      {"drift", "0", "0", "constant drift dK/dTheta"},
      {"theta-res", "0.06", "0.06", "residual water content"},
      {"theta-sat", "0.35", "0.35", "saturated water content"},
      {"big-theta-initial", "0", "0", "initial normalized content"},
  };
}

}  // namespace grw::bench
