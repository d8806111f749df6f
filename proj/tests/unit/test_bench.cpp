#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "grw/bench/output.hpp"
#include "grw/bench/registry.hpp"
#include "grw/constitutive.hpp"
#include "oracles/richards_implicit.hpp"

using namespace grw;
using namespace grw::bench;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("grw_unit_" + name);
  fs::remove_all(p);
  return p;
}

RunResult run_scenario(const std::string& id, const KeyValues& overrides, std::uint64_t seed, unsigned jobs) {
  const Scenario* sc = find_scenario(id);
  EXPECT_NE(sc, nullptr);
  RunContext ctx;
  ctx.params = resolve_params(*sc, Preset::Desk, {}, overrides);
  ctx.seed = seed;
  ctx.jobs = jobs;
  return sc->run(ctx);
}

}  // namespace

TEST(Config, ParsesKeyValueText) {
  std::istringstream in("# comment\n dz = 0.5 \nMax_Iters=10 # trailing\n\n");
  const KeyValues kv = parse_config_text(in);
  EXPECT_EQ(kv.at("dz"), "0.5");
  EXPECT_EQ(kv.at("max-iters"), "10");
  std::istringstream bad("no equals sign\n");
  EXPECT_THROW(parse_config_text(bad), ConfigError);
  EXPECT_THROW(load_config_file("/nonexistent/file.cfg"), ConfigError);
}

TEST(Config, TypedAccessors) {
  Params p(KeyValues{{"a", "1.5"}, {"b", "7"}, {"c", "yes"}, {"d", "x1"}, {"e", "auto"}});
  EXPECT_DOUBLE_EQ(p.num("a"), 1.5);
  EXPECT_EQ(p.count("b"), 7u);
  EXPECT_TRUE(p.flag("c"));
  EXPECT_THROW(p.num("d"), ConfigError);
  EXPECT_THROW(p.integer("a"), ConfigError);
  EXPECT_THROW(p.flag("d"), ConfigError);
  EXPECT_THROW(p.str("missing"), ConfigError);
  EXPECT_THROW(p.choice("d", {"x", "y"}), ConfigError);
  EXPECT_DOUBLE_EQ(p.num_or("e", 3.0), 3.0);
}

TEST(Config, PrecedenceAndUnknownKeys) {
  const Scenario* sc = find_scenario("sander-flux");
  ASSERT_NE(sc, nullptr);
  const std::string key = sc->params.front().key;
  const Params d = resolve_params(*sc, Preset::Desk, {}, {});
  EXPECT_EQ(d.str(key), sc->params.front().desk);
  const Params f = resolve_params(*sc, Preset::Desk, {{key, "11"}}, {});
  EXPECT_EQ(f.str(key), "11");
  const Params c = resolve_params(*sc, Preset::Desk, {{key, "11"}}, {{key, "12"}});
  EXPECT_EQ(c.str(key), "12");
  EXPECT_THROW(resolve_params(*sc, Preset::Desk, {}, {{"no-such-key", "1"}}), ConfigError);
  EXPECT_THROW(resolve_params(*sc, Preset::Desk, {{"scenario", "numdiff"}}, {}), ConfigError);
  EXPECT_NO_THROW(resolve_params(*sc, Preset::Paper, {{"scenario", "sander-flux"}}, {}));
  EXPECT_THROW(parse_preset("huge"), ConfigError);
}

TEST(Registry, ScenariosAreWellFormed) {
  std::set<std::string> ids;
  for (const auto& s : scenarios()) {
    EXPECT_TRUE(ids.insert(s.id).second) << s.id;
    EXPECT_TRUE(static_cast<bool>(s.run)) << s.id;
    std::set<std::string> keys;
    for (const auto& p : s.params) {
      EXPECT_EQ(p.key, normalize_key(p.key));
      EXPECT_TRUE(keys.insert(p.key).second) << s.id << ": duplicate " << p.key;
      EXPECT_FALSE(p.help.empty()) << s.id << ": " << p.key;
    }
  }
  EXPECT_EQ(find_scenario("nope"), nullptr);
}

TEST(Outputs, SummarySchemaAndFiles) {
  const Scenario* sc = find_scenario("trench-flow");
  ASSERT_NE(sc, nullptr);
  RunContext ctx;
  ctx.params = resolve_params(*sc, Preset::Desk, {}, {});
  ctx.seed = 3;
  const RunResult r = sc->run(ctx);
  const Json j = make_summary(*sc, ctx, r, 0.5);
  EXPECT_EQ(j.at("schema"), kSummarySchema);
  EXPECT_EQ(j.at("schema_version"), kSummarySchemaVersion);
  EXPECT_EQ(j.at("scenario"), "trench-flow");
  EXPECT_EQ(j.at("preset"), "desk");
  EXPECT_EQ(j.at("seed"), 3);
  for (const char* k : {"params", "converged", "results", "fields", "series", "wall_time_s"})
    EXPECT_TRUE(j.contains(k)) << k;
  const fs::path dir = scratch_dir("outputs");
  write_outputs(dir, j, r);
  std::ifstream in(dir / "summary.json");
  const Json back = Json::parse(in);
  EXPECT_EQ(back.at("results"), j.at("results"));
  ASSERT_FALSE(r.fields.empty());
  const auto& f = r.fields.front();
  std::ifstream bin(dir / "fields" / (f.name + "." + f.columns.front().first + ".grwfld"), std::ios::binary);
  const Field fld = read_field_binary(bin);
  EXPECT_EQ(fld.grid.nx, f.grid.nx);
  EXPECT_EQ(fld.values, f.columns.front().second);
  EXPECT_TRUE(fs::exists(dir / "fields" / (f.name + ".csv")));
  for (const auto& s : r.series) EXPECT_TRUE(fs::exists(dir / "series" / (s.name + ".csv")));
  fs::remove_all(dir);
}

TEST(Outputs, TableRoundTripKeepsHeaderComments) {
  const fs::path dir = scratch_dir("table");
  Series s{"t", {"a", "b"}, {}};
  s.add({1.0, 2.0});
  s.add({3.0, 0.125});
  write_table(dir / "t.csv", {"provenance line"}, s);
  std::ifstream raw(dir / "t.csv");
  std::string first;
  std::getline(raw, first);
  EXPECT_EQ(first.rfind("#", 0), 0u);
  const Table t = read_table(dir / "t.csv");
  EXPECT_EQ(t.column("b"), (std::vector<double>{2.0, 0.125}));
  fs::remove_all(dir);
}

TEST(Determinism, MonteCarloRunRepeatsUnderFixedSeed) {
  const KeyValues small{{"realizations", "4"}, {"cells-per-corr", "2"}, {"length-x", "2000"}, {"length-y", "2000"}, {"eps-a", "1e-6"}};
  const RunResult a = run_scenario("regional-recharge", small, 7, 1);
  const RunResult b = run_scenario("regional-recharge", small, 7, 3);
  const RunResult c = run_scenario("regional-recharge", small, 8, 1);
  EXPECT_EQ(a.results.dump(), b.results.dump());
  EXPECT_NE(a.results.dump(), c.results.dump());
}

// Manufactured sources checked against difference quotients of the exact
// solutions: f = d_t theta + div q with q = -K grad(psi + z), and the
// transport source d_t(theta c) + div(q c) - D lap c.
namespace {

double dquot(const std::function<double(double)>& f, double x, double h = 1e-4) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

TEST(ManufacturedSources, Flow2DMatchesDifferenceQuotients) {
  auto psi = [](double x, double z, double t) { return mms::Flow2D::psi(x, z, t); };
  auto theta = [&](double x, double z, double t) { return 1.0 / (1.0 - psi(x, z, t)); };
  auto qx = [&](double x, double z, double t) {
    const double p = psi(x, z, t);
    return -p * p * dquot([&](double s) { return psi(s, z, t); }, x);
  };
  auto qz = [&](double x, double z, double t) {
    const double p = psi(x, z, t);
    return -p * p * (dquot([&](double s) { return psi(x, s, t); }, z) + 1.0);
  };
  for (double x : {0.2, 0.5, 0.85})
    for (double z : {0.1, 0.45, 0.7})
      for (double t : {0.3, 1.0}) {
        const double f = dquot([&](double s) { return theta(x, z, s); }, t) +
                         dquot([&](double s) { return qx(s, z, t); }, x) +
                         dquot([&](double s) { return qz(x, s, t); }, z);
        EXPECT_NEAR(mms::Flow2D::source(x, z, t), f, 1e-6);
        const auto q = mms::Flow2D::flux(x, z, t);
        EXPECT_NEAR(q.first, qx(x, z, t), 1e-7);
        EXPECT_NEAR(q.second, qz(x, z, t), 1e-7);
      }
}

TEST(ManufacturedSources, Coupled2DMatchesDifferenceQuotients) {
  const mms::Coupled2D m{0.7};
  auto psi = [](double x, double z, double t) { return mms::Coupled2D::psi(x, z, t); };
  auto c = [](double x, double z, double t) { return mms::Coupled2D::c(x, z, t); };
  auto theta = [&](double x, double z, double t) { return 1.0 / (1.0 - psi(x, z, t) - c(x, z, t) / 10.0); };
  auto qx = [&](double x, double z, double t) {
    const double p = psi(x, z, t);
    return -p * p * dquot([&](double s) { return psi(s, z, t); }, x);
  };
  auto qz = [&](double x, double z, double t) {
    const double p = psi(x, z, t);
    return -p * p * (dquot([&](double s) { return psi(x, s, t); }, z) + 1.0);
  };
  for (double x : {0.25, 0.6})
    for (double z : {0.3, 0.8})
      for (double t : {0.5, 1.0}) {
        const double fp = dquot([&](double s) { return theta(x, z, s); }, t) +
                          dquot([&](double s) { return qx(s, z, t); }, x) +
                          dquot([&](double s) { return qz(x, s, t); }, z);
        const double lap = dquot([&](double s) { return dquot([&](double r) { return c(r, z, t); }, s); }, x) +
                           dquot([&](double s) { return dquot([&](double r) { return c(x, r, t); }, s); }, z);
        const double fc = dquot([&](double s) { return theta(x, z, s) * c(x, z, s); }, t) +
                          dquot([&](double s) { return qx(s, z, t) * c(s, z, t); }, x) +
                          dquot([&](double s) { return qz(x, s, t) * c(x, s, t); }, z) - m.d * lap;
        EXPECT_NEAR(m.fp(x, z, t), fp, 1e-6);
        EXPECT_NEAR(m.fc(x, z, t), fc, 1e-5);
      }
}

TEST(ManufacturedSources, ColumnProblemsMatchDifferenceQuotients) {
  const mms::Coupled1D a{0.5};
  const mms::Degenerate1D b{0.5};
  struct Case {
    std::function<double(double, double)> psi, c, theta, k;
    std::function<std::pair<double, double>(double, double)> src;
    std::function<double(double, double)> flux;
    std::vector<double> zs;
    double d;
  };
  const std::vector<Case> cases = {
      {mms::Coupled1D::psi, mms::Coupled1D::c,
       [](double z, double t) { return 1.0 / (1.0 - mms::Coupled1D::psi(z, t) - mms::Coupled1D::c(z, t) / 10.0); },
       [](double z, double t) { return std::pow(mms::Coupled1D::psi(z, t), 2); },
       [&](double z, double t) { return std::pair{a.sources(z, t).fp, a.sources(z, t).fc}; }, mms::Coupled1D::flux,
       {0.15, 0.5, 0.8}, a.d},
      // Unsaturated points (psi < 0) and a saturated point (psi > 0) at t = 1.
      {mms::Degenerate1D::psi, mms::Degenerate1D::c,
       [](double z, double t) {
         const double p = mms::Degenerate1D::psi(z, t);
         return p >= 0.0 ? 0.3 : 1.0 / (mms::Degenerate1D::kShift - p - mms::Degenerate1D::c(z, t) / 10.0);
       },
       [](double, double) { return 1.0; },
       [&](double z, double t) { return std::pair{b.sources(z, t).fp, b.sources(z, t).fc}; }, mms::Degenerate1D::flux,
       {0.3, 0.5, 0.9}, b.d},
  };
  const double t = 1.0;
  for (const auto& cs : cases)
    for (double z : cs.zs) {
      auto q = [&](double s, double tt) { return -cs.k(s, tt) * (dquot([&](double r) { return cs.psi(r, tt); }, s) + 1.0); };
      EXPECT_NEAR(cs.flux(z, t), q(z, t), 1e-7);
      const double fp = dquot([&](double s) { return cs.theta(z, s); }, t) + dquot([&](double s) { return q(s, t); }, z);
      const double fc = dquot([&](double s) { return cs.theta(z, s) * cs.c(z, s); }, t) +
                        dquot([&](double s) { return q(s, t) * cs.c(s, t); }, z) -
                        cs.d * dquot([&](double s) { return dquot([&](double r) { return cs.c(r, t); }, s); }, z);
      const auto f = cs.src(z, t);
      EXPECT_NEAR(f.first, fp, 1e-6) << "z = " << z;
      EXPECT_NEAR(f.second, fc, 1e-5) << "z = " << z;
    }
}

TEST(ImplicitOracle, SteadyFluxProfileIsStationary) {
  ExpModelParams mp;
  auto k = [&](double psi, double) { return k_exp_psi(psi, mp); };
  const std::size_t n = 41;
  const double dz = 0.05, q0 = 2.77e-7;
  const std::vector<double> psi0 = oracle::steady_flux_profile(n, dz, 0.5, q0, k);
  oracle::ColumnModel m;
  m.n = n;
  m.dz = dz;
  m.theta = [&](double psi, std::size_t) { return theta_exp(psi, mp); };
  m.conductivity = [&](double psi, std::size_t) { return k_exp_psi(psi, mp); };
  m.bottom = oracle::ColumnBc::dirichlet([](double) { return 0.5; });
  m.top = oracle::ColumnBc::flux([q0](double) { return q0; });  // inward, i.e. infiltration
  oracle::ImplicitColumn col(m, psi0);
  col.advance(2000.0, 200.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(col.psi()[j] - psi0[j]));
  // Only the discretization difference between RK4 and finite volumes remains.
  EXPECT_LT(worst, 5e-3);
  for (double qn : col.node_flux()) EXPECT_NEAR(qn, -q0, 0.05 * q0);
}

TEST(ImplicitOracle, LinearSaturatedColumn) {
  oracle::ColumnModel m;
  m.n = 11;
  m.dz = 0.1;
  m.theta = [](double, std::size_t) { return 0.3; };
  m.conductivity = [](double, std::size_t) { return 2.0; };
  m.bottom = oracle::ColumnBc::dirichlet([](double) { return 1.0; });
  m.top = oracle::ColumnBc::dirichlet([](double) { return 0.0; });
  oracle::ImplicitColumn col(m, std::vector<double>(11, 0.0));
  col.advance(1.0, 0.5);
  for (std::size_t j = 0; j < 11; ++j) EXPECT_NEAR(col.psi()[j], 1.0 - 0.1 * j, 1e-9);
  // Head gradient -1 balances gravity: no flux.
  for (double q : col.node_flux()) EXPECT_NEAR(q, 0.0, 1e-9);
}
