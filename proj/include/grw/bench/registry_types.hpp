#pragma once

// Scenario descriptors, run context and run results.

#include <cstdint>
#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "grw/bench/config.hpp"
#include "grw/lattice.hpp"

namespace grw::bench {

using Json = nlohmann::json;

enum class Preset { Desk, Paper };

inline Preset parse_preset(const std::string& s) {
  if (s == "desk") return Preset::Desk;
  if (s == "paper") return Preset::Paper;
  throw ConfigError("unknown preset '" + s + "' (expected desk or paper)");
}
inline const char* to_string(Preset p) { return p == Preset::Desk ? "desk" : "paper"; }

// One documented key with its per-preset defaults.
struct ParamSpec {
  std::string key;
  std::string desk;
  std::string paper;
  std::string help;
};

// Tabular output written to series/<name>.csv.
struct Series {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) {
    require(row.size() == columns.size(), "series '" + name + "': row width mismatch");
    rows.push_back(std::move(row));
  }
};

// Lattice fields written to fields/<name>.csv and one binary dump per column.
struct FieldOut {
  std::string name;
  Grid grid;
  std::vector<std::pair<std::string, std::vector<double>>> columns;
};

struct RunContext {
  Params params;
  std::uint64_t seed{0};
  Preset preset{Preset::Desk};
  unsigned jobs{1};
  std::string fixture_dir;  // root of the fixtures tree; empty disables comparisons

  double num(const std::string& k) const { return params.num(k); }
  const std::string& str(const std::string& k) const { return params.str(k); }
};

struct RunResult {
  Json results = Json::object();
  std::vector<FieldOut> fields;
  std::vector<Series> series;
  bool converged{true};
};

struct Scenario {
  std::string id;
  std::string summary;
  std::vector<ParamSpec> params;
  std::function<RunResult(const RunContext&)> run;
};

// Preset defaults, then file values, then command-line values. Unknown keys
// are rejected so that typos do not silently fall back to defaults.
inline Params resolve_params(const Scenario& sc, Preset preset, const KeyValues& file, const KeyValues& cli) {
  Params p;
  for (const auto& spec : sc.params) p.set(spec.key, preset == Preset::Desk ? spec.desk : spec.paper);
  auto apply = [&](const KeyValues& kv, const char* origin) {
    for (const auto& [k, v] : kv) {
      const std::string key = normalize_key(k);
      if (key == "scenario") {
        if (v != sc.id) throw ConfigError(std::string(origin) + " names scenario '" + v + "', not '" + sc.id + "'");
        continue;
      }
      if (!p.has(key)) throw ConfigError("scenario '" + sc.id + "' has no parameter '" + key + "' (" + origin + ")");
      p.set(key, v);
    }
  };
  apply(file, "config file");
  apply(cli, "command line");
  return p;
}

}  // namespace grw::bench
