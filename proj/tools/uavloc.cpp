// uavloc: command-line front end for the localization experiments.
//
//   uavloc <subcommand> [--config PATH] [--seed U64] [--trials N] [--out DIR] [--parallel N]
//   uavloc rerun MANIFEST [--out DIR]
//
// Exit codes: 0 ok, 2 config/usage error, 3 degenerate geometry, 4 I/O error.

#include "uavloc/manifest.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

enum Exit { kOk = 0, kConfig = 2, kDegenerate = 3, kIo = 4 };

struct CommonArgs {
  std::string config;
  std::uint64_t seed = 0;
  int trials = -1;
  std::string out = ".";
  int parallel = 1;
};

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw uavloc::ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int report(const uavloc::RunManifest& m) {
  std::cout << m.subcommand << ": seed " << m.seed << (m.seed_from_entropy ? " (from entropy)" : "") << ", "
            << m.wall_clock_s << " s\n";
  for (const auto& f : m.outputs) std::cout << "  " << (std::filesystem::path(m.out_dir) / f).string() << '\n';
  std::cout << "  " << (std::filesystem::path(m.out_dir) / "manifest.json").string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative UAV localization experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", uavloc::kToolVersion);

  CommonArgs args;
  bool seed_given = false;
  std::string selected;

  for (const auto& [name, cmd] : uavloc::commands()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", args.config, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t s) { args.seed = s, seed_given = true; }, "master seed (default: entropy)");
    sub->add_option("--trials", args.trials, "Monte Carlo trials per cell")->check(CLI::PositiveNumber);
    sub->add_option("--out", args.out, "output directory")->capture_default_str();
    sub->add_option("--parallel", args.parallel, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->callback([&selected, n = name] { selected = n; });
  }

  std::string manifest_path;
  std::string rerun_out;
  auto* rerun = app.add_subcommand("rerun", "replay a manifest.json");
  rerun->add_option("manifest", manifest_path, "manifest written by an earlier run")->required();
  rerun->add_option("--out", rerun_out, "output directory (default: the manifest's)");
  rerun->callback([&selected] { selected = "rerun"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (selected == "rerun") {
      const auto m = uavloc::read_manifest(manifest_path);
      return report(uavloc::rerun(m, rerun_out.empty() ? m.out_dir : rerun_out));
    }
    uavloc::RunManifest m;
    m.subcommand = selected;
    if (!args.config.empty()) {
      m.config_path = std::filesystem::absolute(args.config).string();
      m.config_text = slurp(args.config);
    }
    m.seed_from_entropy = !seed_given;
    m.seed = seed_given ? args.seed : entropy_seed();
    m.trials = args.trials;
    m.out_dir = args.out;
    m.parallel = args.parallel;
    return report(uavloc::execute(m));
  } catch (const uavloc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const uavloc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kConfig;
  } catch (const uavloc::DomainError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kConfig;
  } catch (const uavloc::DegenerateGeometry& e) {
    std::cerr << "degenerate geometry: " << e.what() << '\n';
    return kDegenerate;
  } catch (const uavloc::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
