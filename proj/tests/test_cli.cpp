#include "uavloc/manifest.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace uavloc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("uavloc_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const fs::path kGolden = UAVLOC_GOLDEN_DIR;

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + UAVLOC_CLI + "\" " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

RunManifest small_run(const std::string& sub, const fs::path& out) {
  RunManifest m;
  m.subcommand = sub;
  m.config_path = (kGolden / "small.cfg").string();
  m.config_text = slurp(kGolden / "small.cfg");
  m.seed = 20240601;
  m.trials = 3;
  m.out_dir = out.string();
  return m;
}

}  // namespace

TEST(ConfigParse, ValuesCommentsAndLists) {
  const auto c = Config::parse("a = 1.5  # note\n\n  b=  x y \nlist = 1, 2,3\nflag = yes\nv = 1,2,3\n");
  EXPECT_EQ(c.get("a", 0.0), 1.5);
  EXPECT_EQ(c.get_string("b", ""), "x y");
  EXPECT_EQ(c.get_list("list", {}), (std::vector<double>{1, 2, 3}));
  EXPECT_TRUE(c.get_bool("flag", false));
  EXPECT_EQ(c.get_vec3("v", Vec3::Zero()), Vec3(1, 2, 3));
  EXPECT_EQ(c.get("missing", 7.0), 7.0);
}

TEST(ConfigParse, Errors) {
  EXPECT_THROW(Config::parse("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(Config::parse("just words\n"), ConfigError);
  EXPECT_THROW(Config::parse(" = 3\n"), ConfigError);
  const auto c = Config::parse("x = 1.5q\nn = 2.5\nb = maybe\nv = 1, 2\n");
  EXPECT_THROW(c.get("x", 0.0), ConfigError);
  EXPECT_THROW(c.get_int("n", 0), ConfigError);
  EXPECT_THROW(c.get_bool("b", false), ConfigError);
  EXPECT_THROW(c.get_vec3("v", Vec3::Zero()), ConfigError);
  EXPECT_THROW(c.check_keys({"x", "n", "b"}), ConfigError);
  try {
    Config::parse("a = 1\n\nb = 2\na = 3\n", "run.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("run.cfg:4"), std::string::npos) << e.what();
  }
}

TEST(ConfigParse, GoldenConfigUsesKnownKeys) {
  EXPECT_NO_THROW(Config::load((kGolden / "small.cfg").string()).check_keys(config_keys()));
}

TEST(Csv, NumbersRoundTrip) {
  Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal(0.0, 1.0) * std::pow(10.0, rng.uniform(-12, 12));
    EXPECT_EQ(std::strtod(format_number(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Csv, HeaderAndRowWidth) {
  const auto dir = scratch("csv");
  const auto p = (dir / "t.csv").string();
  {
    CsvWriter w(p, {"a", "b", "c"});
    w.row({1.25, 3LL, std::string("x")});
    EXPECT_THROW(w.row({1.0}), UsageError);
  }
  EXPECT_EQ(slurp(p), std::string(kCsvVersion) + "\na,b,c\n1.25,3,x\n");
  EXPECT_THROW(CsvWriter((dir / "none" / "t.csv").string(), {"a"}), IoError);
}

TEST(Manifest, JsonRoundTrip) {
  RunManifest m = small_run("crlb", "/tmp/x");
  m.seed = 18446744073709551557ull;
  m.outputs = {"a.csv", "b.csv"};
  m.wall_clock_s = 1.5;
  const RunManifest back = manifest_from_json(nlohmann::json::parse(to_json(m).dump()));
  EXPECT_EQ(to_json(back), to_json(m));
  EXPECT_THROW(manifest_from_json(nlohmann::json{{"seed", 1}}), ConfigError);
}

TEST(Manifest, RerunIsByteIdentical) {
  const auto a = scratch("first"), b = scratch("second");
  const RunManifest done = execute(small_run("crlb", a));
  const RunManifest again = rerun(read_manifest((a / "manifest.json").string()), b.string());
  ASSERT_EQ(done.outputs, again.outputs);
  ASSERT_FALSE(done.outputs.empty());
  for (const auto& f : done.outputs) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Manifest, RejectsBadRuns) {
  const auto d = scratch("bad");
  RunManifest m = small_run("crlb", d);
  m.config_text += "crlb.bogus = 1\n";
  EXPECT_THROW(execute(m), ConfigError);
  m = small_run("nonsense", d);
  EXPECT_THROW(execute(m), UsageError);
  m = small_run("crlb", d);
  m.parallel = 0;
  EXPECT_THROW(execute(m), UsageError);
}

TEST(Golden, ErrorModelAndCrlbCsv) {
  for (const std::string sub : {"error-model", "crlb"}) {
    const auto d = scratch("golden_" + sub);
    const RunManifest m = execute(small_run(sub, d));
    for (const auto& f : m.outputs) {
      ASSERT_TRUE(fs::exists(kGolden / f)) << f;
      EXPECT_EQ(slurp(d / f), slurp(kGolden / f)) << f;
    }
  }
}

TEST(Cli, ExitCodes) {
  const auto d = scratch("cli");
  const std::string cfg = (kGolden / "small.cfg").string();
  EXPECT_EQ(run_cli("--version"), 0);
  EXPECT_EQ(run_cli("crlb --config " + cfg + " --seed 3 --trials 2 --out " + (d / "ok").string()), 0);
  EXPECT_TRUE(fs::exists(d / "ok" / "manifest.json"));
  EXPECT_EQ(run_cli("rerun " + (d / "ok" / "manifest.json").string() + " --out " + (d / "again").string()), 0);
  EXPECT_EQ(slurp(d / "ok" / "crlb_scaling.csv"), slurp(d / "again" / "crlb_scaling.csv"));

  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("teleport"), 2);
  EXPECT_EQ(run_cli("crlb --trials 0"), 2);
  EXPECT_EQ(run_cli("crlb --config " + (d / "missing.cfg").string()), 2);
  std::ofstream(d / "bad.cfg") << "crlb.d_max = fifty\n";
  EXPECT_EQ(run_cli("crlb --seed 1 --config " + (d / "bad.cfg").string() + " --out " + d.string()), 2);
  std::ofstream(d / "unknown.cfg") << "crlb.dmax = 50\n";
  EXPECT_EQ(run_cli("crlb --seed 1 --config " + (d / "unknown.cfg").string() + " --out " + d.string()), 2);
  std::ofstream(d / "domain.cfg") << "model.samples = 10000\nsetup1.dt = -1\n";
  EXPECT_EQ(run_cli("crlb --seed 1 --config " + (d / "domain.cfg").string() + " --out " + d.string()), 2);

  std::ofstream(d / "plain") << "x";
  EXPECT_EQ(run_cli("crlb --seed 1 --trials 1 --config " + cfg + " --out " + (d / "plain" / "sub").string()), 4);
  EXPECT_EQ(run_cli("rerun " + (d / "missing.json").string()), 4);
}
