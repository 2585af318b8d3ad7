#pragma once

// Run manifests: everything needed to replay a subcommand. The config text is
// stored inline so a replay does not depend on the original file surviving.

#include "uavloc/experiments.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

namespace uavloc {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunManifest {
  std::string subcommand;
  std::string config_path;  // empty when run on defaults
  std::string config_text;
  std::uint64_t seed = 0;
  bool seed_from_entropy = false;
  int trials = -1;
  std::string out_dir;
  int parallel = 1;
  std::string version = kToolVersion;
  std::string started_utc;
  double wall_clock_s = 0.0;
  std::vector<std::string> outputs;
};

inline nlohmann::json to_json(const RunManifest& m) {
  return nlohmann::json{{"subcommand", m.subcommand},
                        {"config_path", m.config_path},
                        {"config_text", m.config_text},
                        {"seed", m.seed},
                        {"seed_from_entropy", m.seed_from_entropy},
                        {"trials", m.trials},
                        {"out_dir", m.out_dir},
                        {"parallel", m.parallel},
                        {"version", m.version},
                        {"started_utc", m.started_utc},
                        {"wall_clock_s", m.wall_clock_s},
                        {"outputs", m.outputs}};
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  try {
    m.subcommand = j.at("subcommand").get<std::string>();
    m.config_path = j.value("config_path", std::string());
    m.config_text = j.value("config_text", std::string());
    m.seed = j.at("seed").get<std::uint64_t>();
    m.seed_from_entropy = j.value("seed_from_entropy", false);
    m.trials = j.value("trials", -1);
    m.out_dir = j.value("out_dir", std::string());
    m.parallel = j.value("parallel", 1);
    m.version = j.value("version", std::string());
    m.started_utc = j.value("started_utc", std::string());
    m.wall_clock_s = j.value("wall_clock_s", 0.0);
    m.outputs = j.value("outputs", std::vector<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(concat("malformed manifest: ", e.what()));
  }
  return m;
}

inline void write_manifest(const RunManifest& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError(concat("cannot open '", path, "' for writing"));
  f << to_json(m).dump(2) << '\n';
  if (!f) throw IoError(concat("write failed on '", path, "'"));
}

inline RunManifest read_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError(concat("cannot read manifest '", path, "'"));
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(concat(path, ": ", e.what()));
  }
  return manifest_from_json(j);
}

using Command = std::function<std::vector<std::string>(const Config&, const RunOptions&)>;

inline const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"error-model", cmd_error_model},   {"crlb", cmd_crlb},
      {"spatial-bench", cmd_spatial_bench}, {"magd-bench", cmd_magd_bench},
      {"attack-eval", cmd_attack_eval},   {"defense-bench", cmd_defense_bench}};
  return table;
}

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Runs `m.subcommand` into `m.out_dir`, fills in outputs and timing, and
// writes manifest.json next to the CSV files.
inline RunManifest execute(RunManifest m) {
  auto it = commands().find(m.subcommand);
  if (it == commands().end()) throw UsageError(concat("unknown subcommand '", m.subcommand, "'"));
  const Config cfg = Config::parse(m.config_text, m.config_path.empty() ? "<config>" : m.config_path);
  cfg.check_keys(config_keys());
  if (m.parallel < 1) throw UsageError("--parallel must be >= 1");
  if (m.trials == 0 || m.trials < -1) throw UsageError("--trials must be positive");

  RunOptions o;
  o.seed = m.seed;
  o.trials = m.trials;
  o.out_dir = m.out_dir;
  o.parallel = m.parallel;

  m.version = kToolVersion;
  m.started_utc = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const auto files = it->second(cfg, o);
  m.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.outputs.clear();
  for (const auto& f : files) m.outputs.push_back(std::filesystem::path(f).filename().string());
  write_manifest(m, detail::path_in(o, "manifest.json"));
  return m;
}

// Replays a manifest into another directory.
inline RunManifest rerun(const RunManifest& original, const std::string& out_dir) {
  RunManifest m = original;
  m.out_dir = out_dir;
  return execute(m);
}

}  // namespace uavloc
