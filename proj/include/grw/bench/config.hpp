#pragma once

// Flat key = value configuration. Keys are case-insensitive and treat '_'
// and '-' alike, so `l_param` in a file and `--l-param` on the command line
// name the same entry. Lines starting with '#' are comments.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "grw/errors.hpp"

namespace grw::bench {

inline std::string normalize_key(std::string k) {
  std::transform(k.begin(), k.end(), k.begin(), [](unsigned char ch) {
    return ch == '_' ? '-' : static_cast<char>(std::tolower(ch));
  });
  return k;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

using KeyValues = std::map<std::string, std::string>;

inline KeyValues parse_config_text(std::istream& in, const std::string& origin = "<config>") {
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    out[key] = value;
  }
  return out;
}

inline KeyValues load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config_text(in, path);
}

// Resolved parameter set of one run.
class Params {
 public:
  Params() = default;
  explicit Params(KeyValues kv) {
    for (auto& [k, v] : kv) values_[normalize_key(k)] = v;
  }

  void set(const std::string& key, std::string value) { values_[normalize_key(key)] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(normalize_key(key)) > 0; }
  const KeyValues& all() const { return values_; }

  const std::string& str(const std::string& key) const {
    auto it = values_.find(normalize_key(key));
    if (it == values_.end()) throw ConfigError("missing parameter '" + key + "'");
    return it->second;
  }

  double num(const std::string& key) const {
    const std::string& s = str(key);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw ConfigError("parameter '" + key + "': '" + s + "' is not a number");
    return v;
  }

  long integer(const std::string& key) const {
    const double v = num(key);
    if (v != static_cast<double>(static_cast<long>(v)))
      throw ConfigError("parameter '" + key + "': '" + str(key) + "' is not an integer");
    return static_cast<long>(v);
  }

  std::size_t count(const std::string& key) const {
    const long v = integer(key);
    if (v < 0) throw ConfigError("parameter '" + key + "' must be nonnegative");
    return static_cast<std::size_t>(v);
  }

  bool flag(const std::string& key) const {
    std::string s = str(key);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw ConfigError("parameter '" + key + "': '" + str(key) + "' is not a boolean");
  }

  // Value restricted to a fixed vocabulary.
  const std::string& choice(const std::string& key, const std::vector<std::string>& allowed) const {
    const std::string& s = str(key);
    if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
      throw ConfigError("parameter '" + key + "': '" + s + "' not in {" + list + "}");
    }
    return s;
  }

  bool is_auto(const std::string& key) const { return str(key) == "auto"; }
  double num_or(const std::string& key, double fallback) const { return is_auto(key) ? fallback : num(key); }

 private:
  KeyValues values_;
};

}  // namespace grw::bench
