#pragma once

// Numerical diffusion of the biased and unbiased walks: a Gaussian plume in
// a uniform downward flow is advanced and the diffusion coefficient is
// recovered from the growth of its spatial variance.

#include <cmath>
#include <string>
#include <vector>

#include "grw/analysis.hpp"
#include "grw/bench/common.hpp"
#include "grw/bench/parallel.hpp"
#include "grw/transport.hpp"

namespace grw::bench {

struct NumdiffCase {
  std::string scheme;  // "bgrw" or "ugrw"
  double dx{0.1};
  std::size_t steps{1};
};

// Default step counts per grid spacing.
inline std::size_t numdiff_default_steps(const std::string& scheme, double dx) {
  struct Row {
    double dx;
    std::size_t bgrw, ugrw;
  };
  static const Row rows[] = {{0.1, 2, 4}, {0.05, 9, 4}, {0.01, 239, 19}, {0.005, 960, 39}};
  for (const auto& r : rows)
    if (std::abs(r.dx - dx) < 1e-12) return scheme == "bgrw" ? r.bgrw : r.ugrw;
  throw ConfigError("no default step count for dx = " + std::to_string(dx) + "; set steps explicitly");
}

struct NumdiffOutcome {
  NumdiffCase cs;
  double dt{0.0}, peclet{0.0};
  int amplitude{1};
  bool constraints_checked{true};
  DiffusionEstimate est;
  double mass_drift{0.0};
};

inline NumdiffOutcome run_numdiff_case(const NumdiffCase& cs, const Params& p) {
  const double lx = p.num("width"), lz = p.num("height");
  const Grid g = plane_grid(lx, lz, cs.dx, cs.dx);
  const double dcoef = p.num("diffusion"), vz = p.num("velocity");
  const double t0 = p.num("t0"), t_end = p.num("t-end");
  const double xc = p.num("x-centre"), zc = p.num("z-centre");
  NumdiffOutcome out;
  out.cs = cs;
  out.dt = (t_end - t0) / static_cast<double>(cs.steps);
  out.peclet = std::abs(vz) * cs.dx / dcoef;
  const double var0 = 2.0 * dcoef * t0;
  const auto c0 = sample(g, [&](double x, double z) {
    return std::exp(-((x - xc) * (x - xc) + (z - zc) * (z - zc)) / (2.0 * var0));
  });
  VelocityField vel{g, std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), vz)};
  std::vector<Snapshot> snaps{{t0, c0}};
  double m0 = 0.0;
  for (double c : c0) m0 += c;

  if (cs.scheme == "bgrw") {
    TransportProblem tp;
    tp.grid = g;
    tp.d1 = tp.d2 = dcoef;
    tp.boundary = [](const BoundaryNode&, double) { return BoundaryCondition::no_flow(); };
    tp.c0 = c0;
    tp.t_end = t_end;
    TransportOptions opt;
    // Outside Pe <= 2 the walk is run unchecked to expose its behaviour.
    out.constraints_checked = out.peclet <= 2.0 * (1.0 + 1e-12);
    opt.check_constraints = out.constraints_checked;
    BgrwTransport w(tp, opt);
    for (std::size_t k = 1; k <= cs.steps; ++k) {
      w.decoupled_step(vel, out.dt);
      snaps.push_back({t0 + static_cast<double>(k) * out.dt, w.concentration()});
    }
  } else {
    out.amplitude = choose_jump_amplitude(dcoef, dcoef, out.dt, g);
    const UgrwParams up = make_ugrw_params(vel, dcoef, dcoef, out.dt, out.amplitude);
    std::vector<double> n = c0;
    for (std::size_t k = 1; k <= cs.steps; ++k) {
      n = ugrw_step(n, g, up);
      snaps.push_back({t0 + static_cast<double>(k) * out.dt, n});
    }
  }
  out.est = moment_diffusion(g, snaps, dcoef, p.num("boundary-tol"));
  double m1 = 0.0;
  for (double c : snaps.back().values) m1 += c;
  out.mass_drift = std::abs(m1 - m0) / m0;
  return out;
}

inline RunResult run_numdiff(const RunContext& ctx) {
  const Params& p = ctx.params;
  const std::string scheme = p.choice("scheme", {"ugrw", "bgrw", "both"});
  std::vector<std::string> schemes;
  if (scheme == "both")
    schemes = {"ugrw", "bgrw"};
  else
    schemes = {scheme};
  std::vector<double> dxs;
  if (p.str("dx") == "all")
    dxs = {0.1, 0.05, 0.01, 0.005};
  else
    dxs = {p.num("dx")};
  std::vector<NumdiffCase> cases;
  for (const auto& s : schemes)
    for (double dx : dxs)
      cases.push_back({s, dx, p.is_auto("steps") ? numdiff_default_steps(s, dx) : p.count("steps")});
  std::vector<NumdiffOutcome> res(cases.size());
  parallel_for(cases.size(), ctx.jobs, [&](std::size_t k) { res[k] = run_numdiff_case(cases[k], p); });

  RunResult r;
  Series tab{"numerical_diffusion",
             {"ugrw", "dx", "steps", "dt", "peclet", "amplitude", "d_x", "d_z", "eps_dx", "eps_dz", "mass_drift"},
             {}};
  Json rows = Json::array();
  for (const auto& o : res) {
    tab.add({o.cs.scheme == "ugrw" ? 1.0 : 0.0, o.cs.dx, static_cast<double>(o.cs.steps), o.dt, o.peclet,
             static_cast<double>(o.amplitude), o.est.d_x, o.est.d_z, o.est.eps_dx, o.est.eps_dz, o.mass_drift});
    rows.push_back({{"scheme", o.cs.scheme},
                    {"dx", o.cs.dx},
                    {"steps", o.cs.steps},
                    {"dt", o.dt},
                    {"peclet", o.peclet},
                    {"constraints_checked", o.constraints_checked},
                    {"amplitude", o.amplitude},
                    {"d_x", o.est.d_x},
                    {"d_z", o.est.d_z},
                    {"eps_dx", o.est.eps_dx},
                    {"eps_dz", o.est.eps_dz},
                    {"eps", std::max(o.est.eps_dx, o.est.eps_dz)},
                    {"plume_inside", o.est.valid},
                    {"mass_drift", o.mass_drift}});
  }
  r.results["cases"] = rows;
  r.series.push_back(std::move(tab));
  return r;
}

inline std::vector<ParamSpec> numdiff_params() {
  return {
      {"scheme", "both", "both", "ugrw|bgrw|both"},
      {"dx", "all", "all", "grid spacing, or all for 0.1, 0.05, 0.01, 0.005"},
      {"steps", "auto", "auto", "number of steps from t0 to t-end (auto: per-grid default)"},
      {"width", "2", "2", "domain width"},
      {"height", "3", "3", "domain height"},
      {"diffusion", "0.001", "0.001", "diffusion coefficient"},
      {"velocity", "-0.0331", "-0.0331", "vertical velocity"},
      {"t0", "1", "1", "age of the initial Gaussian plume"},
      {"t-end", "3", "3", "final time"},
      {"x-centre", "1", "1", "initial plume centre x"},
      {"z-centre", "2.1", "2.1", "initial plume centre z"},
      {"boundary-tol", "1e-12", "1e-12", "boundary mass fraction above which the estimate is flagged"},
  };
}

}  // namespace grw::bench
