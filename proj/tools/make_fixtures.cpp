// Writes the reference profiles used by scenario comparisons:
//   fixtures/scenario1d/{homogeneous,heterogeneous}_{initial,final}.csv
//   fixtures/warrick/reference_depths.csv
// Both come from the implicit Newton oracle on grids four times finer than
// the walk grids.
//
// usage: make_fixtures <fixtures-dir>

#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "grw/bench/common.hpp"
#include "grw/bench/richards1d.hpp"
#include "grw/constitutive.hpp"
#include "oracles/richards_implicit.hpp"

namespace fs = std::filesystem;
using namespace grw;
using namespace grw::bench;

namespace {

std::string today() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%d", std::gmtime(&t));
  return buf;
}

void scenario1d(const fs::path& root, const std::string& which) {
  Params p;
  for (const auto& s : scenario1d_params()) p.set(s.key, s.desk);
  p.set("case", which);
  const Scenario1dSetup S = scenario1d_setup(p);
  const int refine = 4;
  const double dz = S.grid.dz / refine;
  const std::size_t n = (S.grid.nz - 1) * refine + 1;
  const double layer = p.num("layer-z"), contrast = p.num("k-contrast");
  auto kscale_z = [&](double z) { return which == "heterogeneous" && z >= layer - 1e-12 ? contrast : 1.0; };
  std::vector<double> zs(n), ks(n);
  for (std::size_t j = 0; j < n; ++j) {
    zs[j] = static_cast<double>(j) * dz;
    ks[j] = kscale_z(zs[j]);
  }
  const ExponentialLaw law = S.law;
  // RK4 stage points never touch node heights, so the layer interface at a
  // node is resolved exactly.
  auto k_of = [&](double psi, double z) { return law.conductivity(psi) * kscale_z(z); };
  const std::vector<double> psi0 = oracle::steady_flux_profile(n, dz, S.psi_bottom, S.q0, k_of);

  oracle::ColumnModel m;
  m.n = n;
  m.dz = dz;
  m.theta = [law](double psi, std::size_t) { return law.theta(psi); };
  m.conductivity = [law, ks](double psi, std::size_t j) { return law.conductivity(psi) * ks[j]; };
  const double pb = S.psi_bottom;
  m.bottom = oracle::ColumnBc::dirichlet([pb](double) { return pb; });
  m.top = oracle::ColumnBc::flux([S](double t) { return S.flux(t); });
  oracle::ImplicitColumn col(m, psi0);
  col.advance(S.t_ramp, 0.25);
  col.advance(p.num("t-end"), 2.0);

  auto write = [&](const std::string& stage, const std::vector<double>& psi, const std::vector<double>& q) {
    Series s{"profile", {"z", "psi", "theta", "q"}, {}};
    for (std::size_t j = 0; j < n; ++j) s.add({zs[j], psi[j], law.theta(psi[j]), q[j]});
    write_table(root / "scenario1d" / (which + "_" + stage + ".csv"),
                {"layered column, case " + which + ", " + stage + " state",
                 "generator: make_fixtures (implicit mixed-form finite volumes, Newton, backward Euler)",
                 stage == "initial" ? "steady profile by RK4 on dpsi/dz = q0/K - 1, q = -q0"
                                    : "t = " + std::to_string(p.num("t-end")) + " s, dt <= 0.25 s on the ramp, <= 2 s after",
                 "dz = " + std::to_string(dz) + " m (walk grid / 4), exponential law",
                 "generated " + today()},
                s);
  };
  write("initial", psi0, std::vector<double>(n, -S.q0));
  write("final", col.psi(), col.node_flux());
  std::cout << "scenario1d " << which << ": " << col.newton_iterations() << " Newton iterations\n";
}

void warrick(const fs::path& root) {
  Params p;
  for (const auto& s : warrick_params()) p.set(s.key, s.desk);
  VanGenuchtenLaw law;
  law.p = VgmParams{p.num("theta-res"), p.num("theta-sat"), p.num("k-sat"), p.num("alpha"), p.num("n")};
  const int refine = 4;
  const double dz = p.num("dz") / refine;
  const std::size_t n = nodes_for(p.num("depth"), dz);
  const double psi_i = psi_vgm(p.num("theta-initial"), law.p);
  oracle::ColumnModel m;
  m.n = n;
  m.dz = dz;
  m.theta = [law](double psi, std::size_t) { return law.theta(psi); };
  m.conductivity = [law](double psi, std::size_t) { return law.conductivity(psi); };
  m.bottom = oracle::ColumnBc::no_flow();
  const double top = p.num("psi-top");
  m.top = oracle::ColumnBc::dirichlet([top](double) { return top; });
  oracle::ImplicitColumn col(m, std::vector<double>(n, psi_i));
  const Grid g = Grid::column(n, dz);
  Series s{"depths", {"t", "theta", "depth"}, {}};
  for (double t : warrick_output_times()) {
    col.advance(t, 2e-4);
    std::vector<double> th(n);
    for (std::size_t j = 0; j < n; ++j) th[j] = law.theta(col.psi()[j]);
    for (double lv : warrick_theta_levels()) s.add({t, lv, front_depth(g, th, lv)});
  }
  write_table(root / "warrick" / "reference_depths.csv",
              {"constant-head infiltration, wetting front depth below the surface [cm] by water content",
               "generator: make_fixtures (implicit mixed-form finite volumes, Newton, backward Euler)",
               "dz = " + std::to_string(dz) + " cm, dt <= 2e-4 h, linear interpolation from the surface downward",
               "generated " + today()},
              s);
  std::cout << "warrick: " << col.newton_iterations() << " Newton iterations\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <fixtures-dir>\n";
    return 3;
  }
  const fs::path root = argv[1];
  try {
    scenario1d(root, "homogeneous");
    scenario1d(root, "heterogeneous");
    warrick(root);
  } catch (const std::exception& e) {
    std::cerr << "make_fixtures: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
