#pragma once

// Run report emission: summary.json, fields/*.csv (+ binary dumps) and
// series/*.csv under one output directory.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <string>

#include "grw/bench/registry_types.hpp"
#include "grw/lattice.hpp"

namespace grw::bench {

inline constexpr const char* kSummarySchema = "grwsim-summary";
inline constexpr int kSummarySchemaVersion = 1;

inline Json make_summary(const Scenario& sc, const RunContext& ctx, const RunResult& r, double wall_seconds) {
  Json j;
  j["schema"] = kSummarySchema;
  j["schema_version"] = kSummarySchemaVersion;
  j["scenario"] = sc.id;
  j["preset"] = to_string(ctx.preset);
  j["seed"] = ctx.seed;
  j["params"] = Json::object();
  for (const auto& [k, v] : ctx.params.all()) j["params"][k] = v;
  j["converged"] = r.converged;
  j["results"] = r.results;
  j["fields"] = Json::array();
  for (const auto& f : r.fields) j["fields"].push_back(f.name);
  j["series"] = Json::array();
  for (const auto& s : r.series) j["series"].push_back(s.name);
  j["wall_time_s"] = wall_seconds;
  return j;
}

inline void write_series_csv(std::ostream& os, const Series& s) {
  for (std::size_t c = 0; c < s.columns.size(); ++c) os << (c ? "," : "") << s.columns[c];
  os << "\n" << std::setprecision(17);
  for (const auto& row : s.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << "\n";
  }
}

inline void write_outputs(const std::filesystem::path& dir, const Json& summary, const RunResult& r) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "fields");
  fs::create_directories(dir / "series");
  auto open = [](const fs::path& p, std::ios::openmode mode = std::ios::out) {
    std::ofstream os(p, mode);
    if (!os) throw ConfigError("cannot write '" + p.string() + "'");
    return os;
  };
  {
    auto os = open(dir / "summary.json");
    os << std::setw(2) << summary << "\n";
  }
  for (const auto& f : r.fields) {
    std::vector<std::pair<std::string, const std::vector<double>*>> cols;
    for (const auto& [name, v] : f.columns) cols.emplace_back(name, &v);
    auto os = open(dir / "fields" / (f.name + ".csv"));
    write_fields_csv(os, f.grid, cols);
    for (const auto& [name, v] : f.columns) {
      auto bs = open(dir / "fields" / (f.name + "." + name + ".grwfld"), std::ios::out | std::ios::binary);
      write_field_binary(bs, f.grid, v);
    }
  }
  for (const auto& s : r.series) {
    auto os = open(dir / "series" / (s.name + ".csv"));
    write_series_csv(os, s);
  }
}

}  // namespace grw::bench
