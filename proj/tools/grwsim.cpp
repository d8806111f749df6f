// grwsim: command-line driver for the benchmark scenarios.
//
//   grwsim run <scenario> [--config FILE] [--seed N] [--levels K] [--jobs J]
//              [--out DIR] [--preset desk|paper] [--<key> <value> ...]
//   grwsim list
//   grwsim describe <scenario>
//
// Exit codes: 0 success, 2 a solve did not converge, 3 configuration error
// or unknown scenario, 4 any other failure.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>
#include <thread>

#include "grw/bench/output.hpp"
#include "grw/bench/registry.hpp"

namespace {

using namespace grw::bench;

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRuntime = 4;

#ifndef GRW_FIXTURE_DIR
#define GRW_FIXTURE_DIR ""
#endif

// Turns leftover "--key value" / "--key=value" tokens into overrides.
KeyValues parse_overrides(const std::vector<std::string>& rest) {
  KeyValues kv;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const std::string& tok = rest[i];
    if (tok.rfind("--", 0) != 0 || tok.size() <= 2) throw grw::ConfigError("unexpected argument '" + tok + "'");
    std::string key = tok.substr(2), value;
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= rest.size()) throw grw::ConfigError("option '--" + key + "' needs a value");
      value = rest[++i];
    }
    kv[normalize_key(key)] = value;
  }
  return kv;
}

void print_list() {
  for (const auto& s : scenarios()) std::cout << std::left << std::setw(22) << s.id << s.summary << "\n";
}

int describe(const std::string& id) {
  const Scenario* sc = find_scenario(id);
  if (!sc) {
    std::cerr << "grwsim: unknown scenario '" << id << "' (see grwsim list)\n";
    return kExitConfig;
  }
  std::cout << sc->id << ": " << sc->summary << "\n\nparameters (desk / paper defaults):\n";
  for (const auto& p : sc->params) {
    std::cout << "  --" << std::left << std::setw(24) << p.key << p.desk;
    if (p.paper != p.desk) std::cout << " / " << p.paper;
    std::cout << "\n      " << p.help << "\n";
  }
  return kExitOk;
}

struct RunArgs {
  std::string scenario, config, out = "grwsim-out", preset = "desk";
  std::uint64_t seed = 1;
  std::size_t levels = 0;
  unsigned jobs = 0;
  std::vector<std::string> rest;
};

int run(const RunArgs& a) {
  const Scenario* sc = find_scenario(a.scenario);
  if (!sc) {
    std::cerr << "grwsim: unknown scenario '" << a.scenario << "' (see grwsim list)\n";
    return kExitConfig;
  }
  RunContext ctx;
  KeyValues cli = parse_overrides(a.rest);
  if (a.levels > 0) cli["levels"] = std::to_string(a.levels);
  const KeyValues file = a.config.empty() ? KeyValues{} : load_config_file(a.config);
  ctx.preset = parse_preset(a.preset);
  ctx.params = resolve_params(*sc, ctx.preset, file, cli);
  ctx.seed = a.seed;
  ctx.jobs = a.jobs > 0 ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GRW_FIXTURE_DIR"))
    ctx.fixture_dir = env;
  else
    ctx.fixture_dir = GRW_FIXTURE_DIR;

  const auto t0 = std::chrono::steady_clock::now();
  const RunResult r = sc->run(ctx);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const Json summary = make_summary(*sc, ctx, r, wall);
  write_outputs(a.out, summary, r);
  std::cout << sc->id << ": " << (r.converged ? "converged" : "NOT converged") << ", " << std::fixed
            << std::setprecision(2) << wall << " s, outputs in " << a.out << "\n";
  return r.converged ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grwsim: random walk solvers for variably saturated flow and solute transport"};
  app.require_subcommand(1);
  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "run a scenario and write summary.json, fields/ and series/");
  run_cmd->add_option("scenario", ra.scenario, "scenario id (see list)")->required();
  run_cmd->add_option("--config", ra.config, "key = value configuration file");
  run_cmd->add_option("--seed", ra.seed, "random seed");
  run_cmd->add_option("--levels", ra.levels, "grid levels of refinement studies");
  run_cmd->add_option("--jobs", ra.jobs, "worker threads (default: hardware concurrency)");
  run_cmd->add_option("--out", ra.out, "output directory");
  run_cmd->add_option("--preset", ra.preset, "desk or paper");
  run_cmd->allow_extras();
  auto* list_cmd = app.add_subcommand("list", "list scenarios");
  std::string describe_id;
  auto* desc_cmd = app.add_subcommand("describe", "show a scenario and its parameters");
  desc_cmd->add_option("scenario", describe_id, "scenario id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  try {
    if (*list_cmd) {
      print_list();
      return kExitOk;
    }
    if (*desc_cmd) return describe(describe_id);
    ra.rest = run_cmd->remaining();
    return run(ra);
  } catch (const grw::ConfigError& e) {
    std::cerr << "grwsim: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const grw::ContractViolation& e) {
    // Invalid parameter values surface as broken solver preconditions.
    std::cerr << "grwsim: invalid parameters: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "grwsim: error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
