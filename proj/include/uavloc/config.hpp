#pragma once

// Flat `key = value` configuration files. '#' starts a comment, blank lines
// are ignored, keys are case-sensitive. Lists are comma separated.

#include "uavloc/core.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace uavloc {

class Config {
 public:
  Config() = default;

  static Config parse(const std::string& text, const std::string& origin = "<config>") {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(concat(origin, ":", lineno, ": expected key = value"));
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError(concat(origin, ":", lineno, ": empty key"));
      if (c.values_.count(key)) throw ConfigError(concat(origin, ":", lineno, ": duplicate key '", key, "'"));
      c.values_[key] = value;
      c.lines_[key] = lineno;
    }
    c.origin_ = origin;
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(concat("cannot read config file '", path, "'"));
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& values() const { return values_; }

  // Every key must be one of `allowed`.
  void check_keys(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : values_)
      if (!allowed.count(k)) throw ConfigError(concat(where(k), "unknown key '", k, "'"));
  }

  double get(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : to_double(key, it->second);
  }
  int get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const double v = to_double(key, it->second);
    if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError(concat(where(key), key, " must be an integer"));
    return static_cast<int>(v);
  }
  bool get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(concat(where(key), key, " must be a boolean, got '", v, "'"));
  }
  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) throw ConfigError(concat(where(key), key, " is an empty list"));
    return out;
  }
  Vec3 get_vec3(const std::string& key, const Vec3& fallback) const {
    if (!has(key)) return fallback;
    auto v = get_list(key, {});
    if (v.size() != 3) throw ConfigError(concat(where(key), key, " needs three values"));
    return {v[0], v[1], v[2]};
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::string where(const std::string& key) const {
    auto it = lines_.find(key);
    return it == lines_.end() ? std::string() : concat(origin_, ":", it->second, ": ");
  }

  double to_double(const std::string& key, const std::string& s) const {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
      throw ConfigError(concat(where(key), key, " expects a number, got '", s, "'"));
    return v;
  }

  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::string origin_ = "<config>";
};

}  // namespace uavloc
