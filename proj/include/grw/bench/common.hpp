#pragma once

// Small helpers shared by the scenario builders.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "grw/bench/registry_types.hpp"
#include "grw/errors.hpp"
#include "grw/flow.hpp"
#include "grw/lattice.hpp"

namespace grw::bench {

inline std::size_t nodes_for(double length, double h) {
  const double n = length / h;
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-9 * std::max(1.0, n)) throw ConfigError("grid spacing does not divide the domain length");
  return static_cast<std::size_t>(r) + 1;
}

inline Grid plane_grid(double lx, double lz, double dx, double dz) {
  return Grid::plane(nodes_for(lx, dx), nodes_for(lz, dz), dx, dz);
}

inline Grid column_grid(double lz, double dz) { return Grid::column(nodes_for(lz, dz), dz); }

template <class F>
std::vector<double> sample(const Grid& g, F&& f) {
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < g.nz; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) v[g.index(i, j)] = f(g.x(i), g.z(j));
  return v;
}

inline VelocityBoundaryMode parse_velocity_mode(const std::string& s) {
  if (s == "analytical") return VelocityBoundaryMode::Analytical;
  if (s == "forward") return VelocityBoundaryMode::ForwardDifference;
  if (s == "extend") return VelocityBoundaryMode::ExtendInterior;
  throw ConfigError("unknown velocity mode '" + s + "' (analytical|forward|extend)");
}

inline const char* to_string(VelocityBoundaryMode m) {
  switch (m) {
    case VelocityBoundaryMode::Analytical: return "analytical";
    case VelocityBoundaryMode::ForwardDifference: return "forward";
    case VelocityBoundaryMode::ExtendInterior: return "extend";
  }
  return "?";
}

inline SourceTiming parse_source_timing(const std::string& s) {
  if (s == "current") return SourceTiming::Current;
  if (s == "lagged") return SourceTiming::Lagged;
  throw ConfigError("unknown source timing '" + s + "' (current|lagged)");
}

inline RedistributionMode parse_redistribution(const std::string& s) {
  if (s == "deterministic") return RedistributionMode::Deterministic;
  if (s == "remainder") return RedistributionMode::RemainderCarry;
  if (s == "binomial") return RedistributionMode::Binomial;
  throw ConfigError("unknown redistribution mode '" + s + "' (deterministic|remainder|binomial)");
}

// CSV table with '#' comment lines and one header row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t index_of(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw ConfigError("table has no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
  std::vector<double> column(const std::string& name) const {
    const std::size_t c = index_of(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(c));
    return out;
  }
};

inline Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table '" + path.string() + "'");
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    if (t.columns.empty()) {
      while (std::getline(ss, cell, ',')) t.columns.push_back(trim(cell));
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("table '" + path.string() + "': bad number '" + cell + "'");
      }
    }
    if (row.size() != t.columns.size()) throw ConfigError("table '" + path.string() + "': ragged row");
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw ConfigError("table '" + path.string() + "' is empty");
  return t;
}

inline void write_table(const std::filesystem::path& path, const std::vector<std::string>& header_lines,
                        const Series& s) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  for (const auto& h : header_lines) os << "# " << h << "\n";
  for (std::size_t c = 0; c < s.columns.size(); ++c) os << (c ? "," : "") << s.columns[c];
  os << "\n" << std::setprecision(17);
  for (const auto& row : s.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << "\n";
  }
}

// Piecewise-linear interpolation on increasing abscissae; clamps outside.
inline double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  require(xs.size() == ys.size() && !xs.empty(), "interp_linear: size mismatch");
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return (1.0 - w) * ys[k - 1] + w * ys[k];
}

inline double relative_l2(const std::vector<double>& v, const std::vector<double>& ref) {
  return relative_error(std::span<const double>(v), std::span<const double>(ref));
}

inline std::vector<double> eoc_or_empty(const std::vector<double>& errs) {
  std::vector<double> out;
  for (std::size_t l = 0; l + 1 < errs.size(); ++l)
    out.push_back(errs[l] > 0.0 && errs[l + 1] > 0.0 ? std::log(errs[l] / errs[l + 1]) / std::log(2.0)
                                                     : std::nan(""));
  return out;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace grw::bench
