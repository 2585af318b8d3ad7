#pragma once

// Experiment drivers behind the command-line tool. Each `run_*` returns the
// numbers, each `cmd_*` runs it and writes the CSV files.

#include "uavloc/config.hpp"
#include "uavloc/crlb.hpp"
#include "uavloc/csv.hpp"
#include "uavloc/scenario.hpp"

#include <filesystem>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace uavloc {

struct RunOptions {
  std::uint64_t seed = 1;
  int trials = -1;  // < 0: per-experiment default
  std::string out_dir = ".";
  int parallel = 1;

  int trials_or(int fallback) const { return trials > 0 ? trials : fallback; }
};

inline const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys = [] {
    std::set<std::string> k = {
        "path.n_p", "path.d0", "path.pr_d0", "path.sigma_r_min", "path.sigma_r_max",
        "model.samples", "model.max_distance",
        "ln1.k_max", "ln1.rho", "ln1.theta", "gd.k_max", "gd.alpha0", "gd.beta", "gd.theta",
        "magd.eps_max", "magd.eps_min", "magd.beta1", "magd.beta2", "magd.momentum", "magd.theta",
        "magd.k_max", "magd.phi", "magd.step3_ratio", "magd.step4_ratio", "magd.fixed_beta", "magd.weighted",
        "tad.lambda_r", "tad.lambda_p", "tad.gamma", "tad.eps_t", "tad.sigma_p_min", "tad.penalize_above",
        "tad.rule",
        "attack.rate", "attack.frame_period", "attack.bias", "attack.manipulation", "attack.jamming",
        "rp.n_malicious", "rp.n_escorts", "rp.follow_radius", "rp.uploaders", "rp.false_uploaders", "rp.steps",
        "error_model.max_distance", "error_model.rssi_samples", "error_model.hist_coverages",
        "error_model.hist_bins", "error_model.hist_samples",
        "crlb.n_list", "crlb.coverage_list", "crlb.rz_list", "crlb.d_max", "crlb.scaling_anchors",
        "crlb.shell_inner",
        "spatial.rz_list", "spatial.n_anchors", "spatial.d_max", "spatial.sigma_p_min", "spatial.sigma_p_max",
        "bench.alpha_list", "bench.na_list",
        "eval.crlb_pa_list", "eval.n_anchors", "eval.sigma_samples", "eval.bias", "eval.manipulation",
        "eval.jamming", "eval.eff_pa_list", "eval.eff_bias_list", "eval.eff_manipulation_list",
        "eval.ed_p_a", "eval.ed_manipulation_list", "eval.ed_bias_list", "eval.eps_list",
        "eval.eps_p_a", "eval.eps_bias", "eval.eps_manipulation", "eval.sens_pa_list",
        "eval.sens_manipulation_list", "eval.sens_bias_list", "eval.sens_eps_list"};
    for (const char* p : {"setup1", "setup2"})
      for (const char* f : {"map_size", "n_anchors", "n_malicious", "speed_min", "speed_max", "target_speed_min",
                            "target_speed_max", "duration", "dt", "coverage", "placement", "sphere_radius",
                            "placement_sigma", "target_sigma", "sigma_p_min", "sigma_p_max", "sigma_p_power"})
        k.insert(std::string(p) + "." + f);
    return k;
  }();
  return keys;
}

// ----- configuration -> parameter structs ---------------------------------------

inline PathLossParams path_from(const Config& c) {
  PathLossParams p;
  p.n_p = c.get("path.n_p", p.n_p);
  p.d0 = c.get("path.d0", p.d0);
  p.pr_d0 = c.get("path.pr_d0", p.pr_d0);
  p.sigma_r_min = c.get("path.sigma_r_min", p.sigma_r_min);
  p.sigma_r_max = c.get("path.sigma_r_max", p.sigma_r_max);
  p.validate();
  return p;
}

inline MagdConfig magd_from(const Config& c) {
  MagdConfig m;
  m.eps_max_t0 = c.get("magd.eps_max", m.eps_max_t0);
  m.eps_min_t0 = c.get("magd.eps_min", m.eps_min_t0);
  m.beta1 = c.get("magd.beta1", m.beta1);
  m.beta2 = c.get("magd.beta2", m.beta2);
  m.momentum = c.get("magd.momentum", m.momentum);
  m.theta = c.get("magd.theta", m.theta);
  m.k_max = c.get_int("magd.k_max", m.k_max);
  m.phi = c.get_int("magd.phi", m.phi);
  m.step3_ratio = c.get("magd.step3_ratio", m.step3_ratio);
  m.step4_ratio = c.get("magd.step4_ratio", m.step4_ratio);
  m.fixed_beta = c.get("magd.fixed_beta", m.fixed_beta);
  return m;
}

inline EstimatorConfig estimators_from(const Config& c) {
  EstimatorConfig e;
  e.ln1.k_max = c.get_int("ln1.k_max", e.ln1.k_max);
  e.ln1.rho = c.get("ln1.rho", e.ln1.rho);
  e.ln1.theta = c.get("ln1.theta", e.ln1.theta);
  e.gd.k_max = c.get_int("gd.k_max", e.gd.k_max);
  e.gd.alpha0 = c.get("gd.alpha0", e.gd.alpha0);
  e.gd.beta = c.get("gd.beta", e.gd.beta);
  e.gd.theta = c.get("gd.theta", e.gd.theta);
  e.magd = magd_from(c);
  e.validate();
  return e;
}

inline Placement placement_from(const std::string& s) {
  if (s == "ball") return Placement::ball;
  if (s == "box") return Placement::box;
  if (s == "gaussian") return Placement::gaussian;
  throw ConfigError(concat("unknown placement '", s, "' (ball, box, gaussian)"));
}

inline std::string placement_name(Placement p) {
  switch (p) {
    case Placement::ball: return "ball";
    case Placement::gaussian: return "gaussian";
    default: return "box";
  }
}

// One simulation setup: the world plus the error profile of its UAVs.
struct Setup {
  WorldConfig world;
  PositionErrorProfile profile;
};

// Anchors inside a 25 m ball around the target, setup 1 speeds.
inline Setup setup1_defaults() {
  Setup s;
  s.world.placement = Placement::ball;
  s.world.sphere_radius = 25.0;
  s.world.n_anchors = 20;
  s.world.speed_min = s.world.target_speed_min = 0.6;
  s.world.speed_max = s.world.target_speed_max = 3.4;
  s.world.sim_duration = 50.0;
  s.world.dt = 0.25;
  s.profile = {0.1, 3.0, true};
  return s;
}

// 300 x 300 x 10 map with anchors concentrated around the center.
inline Setup setup2_defaults() {
  Setup s;
  s.world.placement = Placement::gaussian;
  s.world.placement_sigma = 90.0;
  s.world.target_sigma = 20.0;
  s.world.n_anchors = 100;
  s.world.n_malicious = 33;
  s.world.sim_duration = 15.0;
  s.world.dt = 0.25;
  s.profile = {0.1, 3.0, true};
  return s;
}

inline Setup setup_from(const Config& c, const std::string& prefix, Setup s) {
  auto key = [&](const char* f) { return prefix + "." + f; };
  WorldConfig& w = s.world;
  w.map_size = c.get_vec3(key("map_size"), w.map_size);
  w.n_anchors = c.get_int(key("n_anchors"), w.n_anchors);
  w.n_malicious = c.get_int(key("n_malicious"), w.n_malicious);
  w.speed_min = c.get(key("speed_min"), w.speed_min);
  w.speed_max = c.get(key("speed_max"), w.speed_max);
  w.target_speed_min = c.get(key("target_speed_min"), w.target_speed_min);
  w.target_speed_max = c.get(key("target_speed_max"), w.target_speed_max);
  w.sim_duration = c.get(key("duration"), w.sim_duration);
  w.dt = c.get(key("dt"), w.dt);
  w.coverage_radius = c.get(key("coverage"), w.coverage_radius);
  w.placement = placement_from(c.get_string(key("placement"), placement_name(w.placement)));
  w.sphere_radius = c.get(key("sphere_radius"), w.sphere_radius);
  w.placement_sigma = c.get(key("placement_sigma"), w.placement_sigma);
  w.target_sigma = c.get(key("target_sigma"), w.target_sigma);
  s.profile.sigma_p_min = c.get(key("sigma_p_min"), s.profile.sigma_p_min);
  s.profile.sigma_p_max = c.get(key("sigma_p_max"), s.profile.sigma_p_max);
  s.profile.power = c.get_bool(key("sigma_p_power"), s.profile.power);
  w.validate();
  s.profile.validate();
  return s;
}

inline TadConfig tad_from(const Config& c, const PositionErrorProfile& profile) {
  TadConfig t;
  t.rule = ForgetRule::anchored;
  t.sigma_p_min = profile.min_sigma() > 0.0 ? profile.min_sigma() : t.sigma_p_min;
  t.lambda_r = c.get("tad.lambda_r", t.lambda_r);
  t.lambda_p = c.get("tad.lambda_p", t.lambda_p);
  t.gamma = c.get("tad.gamma", t.gamma);
  t.eps_t = c.get("tad.eps_t", t.eps_t);
  t.sigma_p_min = c.get("tad.sigma_p_min", t.sigma_p_min);
  t.penalize_above = c.get_bool("tad.penalize_above", t.penalize_above);
  const std::string rule = c.get_string("tad.rule", "anchored");
  if (rule == "anchored")
    t.rule = ForgetRule::anchored;
  else if (rule == "verbatim")
    t.rule = ForgetRule::verbatim;
  else
    throw ConfigError(concat("unknown tad.rule '", rule, "' (anchored, verbatim)"));
  t.validate();
  return t;
}

inline ErrorModel model_from(const Config& c, const PositionErrorProfile& profile, std::uint64_t seed) {
  const auto samples = c.get_int("model.samples", 20000);
  if (samples < 100) throw ConfigError("model.samples must be at least 100");
  return ErrorModel::build(path_from(c), profile, c.get("model.max_distance", 60.0), mix_seed(seed, 0x30DE1),
                           static_cast<std::size_t>(samples));
}

inline AttackStrategy strategy_from(const Config& c, bool coordinated) {
  AttackStrategy s;
  s.attack_rate = c.get("attack.rate", 0.7);
  if (coordinated) s.kind = GlobalCoordinated{c.get_int("attack.frame_period", 4)};
  return s;
}

// Scenario trial configuration for the setup 2 world.
inline TrialConfig setup2_trial(const Config& c, const Setup& s) {
  TrialConfig t;
  t.world = s.world;
  t.magd = magd_from(c);
  t.weighted = c.get_bool("magd.weighted", true);
  t.defense.tad_cfg = tad_from(c, s.profile);
  return t;
}

namespace detail {

inline std::string path_in(const RunOptions& o, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  if (ec) throw IoError(concat("cannot create output directory '", o.out_dir, "': ", ec.message()));
  return (std::filesystem::path(o.out_dir) / name).string();
}

inline double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double std_error_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

// Uniform in the shell a <= |p| <= b (a = inner*d_max, b = d_max) restricted
// to |z| <= r_z, by inversion: the radius density is r^2 below r_z and
// r_z * r above it, then the polar cosine is uniform on the allowed band.
// Driven by three uniforms per anchor so runs at different r_z stay coupled.
inline Vec3 cap_shell_point(double u1, double u2, double u3, double d_max, double r_z, double inner) {
  const double a = inner * d_max, b = d_max;
  const double c = std::clamp(r_z, a, b);
  const double m1 = (c * c * c - a * a * a) / 3.0;  // mass below c
  const double m2 = r_z * (b * b - c * c) / 2.0;    // mass above c
  const double t = u1 * (m1 + m2);
  const double r = t <= m1 ? std::cbrt(a * a * a + 3.0 * t) : std::sqrt(c * c + 2.0 * (t - m1) / r_z);
  const double band = std::min(1.0, r_z / r);
  const double cz = (2.0 * u2 - 1.0) * band;
  const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
  const double phi = 2.0 * kPi * u3;
  return {r * sz * std::cos(phi), r * sz * std::sin(phi), r * cz};
}

inline std::vector<Vec3> cap_shell(int n, double d_max, double r_z, double inner, Rng& rng) {
  if (!(r_z > 0.0)) throw DomainError("altitude range must be positive");
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
    out.push_back(cap_shell_point(u1, u2, u3, d_max, r_z, inner));
  }
  return out;
}

inline std::vector<Vec3> uniform_ball(int n, double radius, Rng& rng) {
  std::vector<Vec3> out;
  for (int i = 0; i < n; ++i) out.push_back(radius * std::cbrt(rng.uniform()) * rng.direction());
  return out;
}

// Per-trial detection and false-alarm rates, skipping trials without events.
inline std::pair<std::vector<double>, std::vector<double>> per_trial_rates(const MonteCarloSummary& s) {
  std::vector<double> pd, pf;
  for (const auto& r : s.results) {
    if (r.tp + r.fn > 0) pd.push_back(r.p_d);
    if (r.fp + r.tn > 0) pf.push_back(r.p_f);
  }
  return {pd, pf};
}

inline double mean_in_range(const MonteCarloSummary& s) {
  double nb = 0.0, n = 0.0;
  for (const auto& r : s.results)
    for (int x : r.n_beacons) nb += x, n += 1.0;
  return n > 0.0 ? nb / n : 0.0;
}

}  // namespace detail

// ----- attack effectiveness ------------------------------------------------------

struct EffectivenessPoint {
  double p_a = 0.0;
  double a_t = 0.0;
  double mean_err_noad = 0.0;  // m
  double mean_err_noad_se = 0.0;
  double mean_err_tad = 0.0;  // m, 0 without detector
  double mean_err_tad_se = 0.0;
  double e = 0.0;    // inflation over the clean baseline, no detector
  double e_d = 0.0;  // inflation over the clean baseline, detector on
  double p_d = 0.0;
  double p_d_se = 0.0;
  double p_f = 0.0;
  double p_f_se = 0.0;
  double crlb_floor = 0.0;  // sqrt of CRLB(N (1 - p_a P_d - P_f)), m
};

struct EffectivenessReport {
  std::string mode;
  std::string strategy;
  double baseline = 0.0;  // clean error, m
  double baseline_se = 0.0;
  double mean_in_range = 0.0;
  std::vector<EffectivenessPoint> points;
};

// The share of falsified beacons is held at p_a per round; every grid point
// reuses the trial streams of the baseline.
inline EffectivenessReport measure_effectiveness(const TrialConfig& base, const ErrorModel& model,
                                                 const std::string& mode,
                                                 const std::vector<std::pair<double, double>>& grid, bool detector,
                                                 int trials, std::uint64_t seed, int parallel = 1) {
  if (trials < 1) throw UsageError("trials must be at least 1");
  EffectivenessReport rep;
  rep.mode = mode;
  rep.strategy = strategy_name(base.attack.strategy);
  TrialConfig clean = base;
  clean.attack.enabled = false;
  clean.defense.tad = false;
  const auto s0 = run_monte_carlo(clean, model, trials, seed, parallel);
  rep.baseline = s0.mean_error;
  rep.baseline_se = s0.std_error;
  rep.mean_in_range = detail::mean_in_range(s0);
  const double sigma_m = model.coverage_table.sigma_m(base.world.coverage_radius);

  for (const auto& [p_a, a_t] : grid) {
    if (!(p_a >= 0.0 && p_a <= 1.0)) throw DomainError("p_a must lie in [0, 1]");
    EffectivenessPoint pt;
    pt.p_a = p_a;
    pt.a_t = a_t;
    TrialConfig c = base;
    c.attack.enabled = p_a > 0.0;
    c.attack.mode = make_mode(mode, a_t);
    c.attack.round_fraction = p_a;
    c.defense.tad = false;
    const auto s1 = run_monte_carlo(c, model, trials, seed, parallel);
    pt.mean_err_noad = s1.mean_error;
    pt.mean_err_noad_se = s1.std_error;
    pt.e = s1.mean_error - rep.baseline;
    if (detector) {
      c.defense.tad = true;
      const auto s2 = run_monte_carlo(c, model, trials, seed, parallel);
      pt.mean_err_tad = s2.mean_error;
      pt.mean_err_tad_se = s2.std_error;
      pt.e_d = s2.mean_error - rep.baseline;
      pt.p_d = s2.p_d;
      pt.p_f = s2.p_f;
      const auto [pd, pf] = detail::per_trial_rates(s2);
      pt.p_d_se = detail::std_error_of(pd);
      pt.p_f_se = detail::std_error_of(pf);
    }
    const double n_eff = rep.mean_in_range * (1.0 - p_a * pt.p_d - pt.p_f);
    pt.crlb_floor = n_eff >= 1.0 ? std::sqrt(closed_form_crlb(sigma_m, static_cast<std::size_t>(std::floor(n_eff))))
                                 : std::numeric_limits<double>::infinity();
    rep.points.push_back(pt);
  }
  return rep;
}

struct AttackOptimum {
  double a_t = 0.0;
  double e_d = 0.0;
  double p_d = 0.0;
  bool boundary = false;     // maximum sits on the first or last grid value
  bool p_d_in_band = false;  // P_d at the optimum within [0.35, 0.65]
  EffectivenessReport sweep;
};

inline AttackOptimum optimize_attack_param(const TrialConfig& base, const ErrorModel& model, const std::string& mode,
                                           double p_a, const std::vector<double>& grid, int trials,
                                           std::uint64_t seed, int parallel = 1) {
  if (grid.empty()) throw UsageError("attack parameter grid is empty");
  if (!(p_a >= 0.0 && p_a < 0.5)) throw UsageError("optimal attack parameters are defined for p_a < 0.5");
  std::vector<std::pair<double, double>> pts;
  for (double a : grid) pts.emplace_back(p_a, a);
  AttackOptimum out;
  out.sweep = measure_effectiveness(base, model, mode, pts, true, trials, seed, parallel);
  std::size_t best = 0;
  for (std::size_t i = 1; i < out.sweep.points.size(); ++i)
    if (out.sweep.points[i].e_d > out.sweep.points[best].e_d) best = i;
  out.a_t = out.sweep.points[best].a_t;
  out.e_d = out.sweep.points[best].e_d;
  out.p_d = out.sweep.points[best].p_d;
  out.boundary = grid.size() > 1 && (best == 0 || best + 1 == grid.size());
  out.p_d_in_band = out.p_d >= 0.35 && out.p_d <= 0.65;
  return out;
}

// ----- error model (RSSI and modeled error) --------------------------------------------

struct ErrorModelRun {
  struct RssiRow {
    double d, rssi, mean;
  };
  struct HistRow {
    std::string kind;
    double coverage, center, density, gauss_fit;
  };
  std::vector<RssiRow> rssi;
  std::vector<HistRow> hist;
  ModeledErrorTable sigma_table;
};

inline ErrorModelRun run_error_model(const Config& c, const RunOptions& o) {
  ErrorModelRun out;
  const PathLossParams path = path_from(c);
  const Setup s1 = setup_from(c, "setup1", setup1_defaults());
  Rng rng(o.seed);
  Rng r_rssi = rng.split(1), r_hist = rng.split(2), r_tab = rng.split(3);

  const double d_max = c.get("error_model.max_distance", 100.0);
  const int per_d = c.get_int("error_model.rssi_samples", 20);
  for (double d = 1.0; d <= d_max + 1e-9; d += 1.0) {
    const double mean = path.pr_d0 - 10.0 * path.n_p * std::log10(d / path.d0);
    for (int k = 0; k < per_d; ++k) {
      const double sr = r_rssi.uniform(path.sigma_r_min, path.sigma_r_max);
      out.rssi.push_back({d, rssi_at_distance(d, path, sr, r_rssi), mean});
    }
  }

  const int bins = c.get_int("error_model.hist_bins", 40);
  const int n = c.get_int("error_model.hist_samples", o.trials_or(20000));
  if (bins < 2 || n < 2) throw ConfigError("histograms need at least 2 bins and 2 samples");
  for (double cov : c.get_list("error_model.hist_coverages", {10.0, 30.0, 50.0})) {
    for (const std::string kind : {"distance", "converted"}) {
      std::vector<double> xs;
      xs.reserve(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        const double d = std::max(kDistanceFloor, r_hist.uniform(0.0, cov));
        xs.push_back(kind == "distance" ? measure_distance(d, path, r_hist) - d
                                        : sample_modeled_error(d, path, s1.profile, r_hist));
      }
      const double m = detail::mean_of(xs);
      double var = 0.0;
      for (double x : xs) var += (x - m) * (x - m);
      const double sd = std::sqrt(var / static_cast<double>(xs.size() - 1));
      const double lo = m - 4.0 * sd, hi = m + 4.0 * sd, w = (hi - lo) / bins;
      std::vector<long> counts(static_cast<std::size_t>(bins), 0);
      for (double x : xs) {
        const auto b = static_cast<long>(std::floor((x - lo) / w));
        if (b >= 0 && b < bins) ++counts[static_cast<std::size_t>(b)];
      }
      for (int b = 0; b < bins; ++b) {
        const double center = lo + (b + 0.5) * w;
        out.hist.push_back({kind, cov, center, counts[static_cast<std::size_t>(b)] / (n * w),
                            normal_pdf(center, m, sd)});
      }
    }
  }

  const auto samples = static_cast<std::size_t>(c.get_int("model.samples", 20000));
  out.sigma_table = build_modeled_error_table(path, s1.profile, linear_grid(5.0, c.get("model.max_distance", 60.0), 5.0),
                                              samples, r_tab);
  return out;
}

inline std::vector<std::string> cmd_error_model(const Config& c, const RunOptions& o) {
  const auto r = run_error_model(c, o);
  CsvWriter a(detail::path_in(o, "rssi_vs_distance.csv"), {"distance_m", "rssi_dbm", "rssi_mean_dbm"});
  for (const auto& x : r.rssi) a.row({x.d, x.rssi, x.mean});
  CsvWriter b(detail::path_in(o, "error_histogram.csv"), {"kind", "coverage_m", "bin_center_m", "density", "gauss_fit"});
  for (const auto& x : r.hist) b.row({x.kind, x.coverage, x.center, x.density, x.gauss_fit});
  CsvWriter t(detail::path_in(o, "sigma_m.csv"), {"coverage_m", "sigma_M_m", "mu_f_m"});
  for (const auto& e : r.sigma_table.entries()) t.row({e.radius, e.sigma_m, e.mu_f});
  return {a.path(), b.path(), t.path()};
}

// ----- CRLB surface and non-uniform scaling ---------------------------------------------

struct CrlbRun {
  struct SurfaceRow {
    int n;
    double coverage, sigma_m, mean, std, closed_form;
    int degenerate;
  };
  struct ScalingRow {
    double r_z, unscaled, scaled, benchmark;
  };
  std::vector<SurfaceRow> surface;
  std::vector<ScalingRow> scaling;
};

inline CrlbRun run_crlb(const Config& c, const RunOptions& o) {
  CrlbRun out;
  const Setup s1 = setup_from(c, "setup1", setup1_defaults());
  const ErrorModel model = model_from(c, s1.profile, o.seed);
  const int reps = o.trials_or(100);
  Rng rng(o.seed);

  Rng rs = rng.split(1);
  for (double cov : c.get_list("crlb.coverage_list", {10.0, 20.0, 30.0, 40.0, 50.0})) {
    const double sm = model.coverage_table.sigma_m(cov);
    for (double nd : c.get_list("crlb.n_list", {5, 10, 15, 20, 25, 30, 35, 40})) {
      const int n = static_cast<int>(nd);
      std::vector<double> v;
      int bad = 0;
      for (int k = 0; k < reps; ++k) {
        try {
          v.push_back(crlb_trace(fim(Vec3::Zero(), detail::uniform_ball(n, cov, rs), sm)));
        } catch (const DegenerateGeometry&) {
          ++bad;
        }
      }
      const double m = detail::mean_of(v);
      double var = 0.0;
      for (double x : v) var += (x - m) * (x - m);
      out.surface.push_back({n, cov, sm, m, v.size() > 1 ? std::sqrt(var / (v.size() - 1.0)) : 0.0,
                             closed_form_crlb(sm, static_cast<std::size_t>(n)), bad});
    }
  }

  Rng rz_rng = rng.split(2);
  const double d_max = c.get("crlb.d_max", 50.0);
  const int n = c.get_int("crlb.scaling_anchors", 30);
  const double inner = c.get("crlb.shell_inner", 0.55);
  const double sm = model.coverage_table.sigma_m(d_max);
  std::vector<double> bench;
  for (int k = 0; k < reps; ++k) bench.push_back(crlb_trace(fim(Vec3::Zero(), detail::cap_shell(n, d_max, d_max, inner, rz_rng), sm)));
  const double benchmark = detail::mean_of(bench);
  for (double rz : c.get_list("crlb.rz_list", linear_grid(3.0, 29.0, 2.0))) {
    const ScaleSpec spec = scale_spec(d_max, rz);
    std::vector<double> un, sc;
    for (int k = 0; k < reps; ++k) {
      const Fim3 f = fim(Vec3::Zero(), detail::cap_shell(n, d_max, rz, inner, rz_rng), sm);
      un.push_back(crlb_trace(f));
      sc.push_back(crlb_trace(scaled_fim(f, spec)));
    }
    out.scaling.push_back({rz, detail::mean_of(un), detail::mean_of(sc), benchmark});
  }
  return out;
}

inline std::vector<std::string> cmd_crlb(const Config& c, const RunOptions& o) {
  const auto r = run_crlb(c, o);
  // crlb_m2 is the mean over geometries; the trailing columns are extras
  CsvWriter a(detail::path_in(o, "crlb_surface.csv"),
              {"n_anchors", "coverage_m", "crlb_m2", "crlb_std_m2", "sigma_M_m", "closed_form_m2", "degenerate"});
  for (const auto& x : r.surface)
    a.row({static_cast<long long>(x.n), x.coverage, x.mean, x.std, x.sigma_m, x.closed_form,
           static_cast<long long>(x.degenerate)});
  CsvWriter b(detail::path_in(o, "crlb_scaling.csv"), {"r_z_m", "crlb_unscaled", "crlb_scaled", "crlb_benchmark"});
  for (const auto& x : r.scaling) b.row({x.r_z, x.unscaled, x.scaled, x.benchmark});
  return {a.path(), b.path()};
}

// ----- spatial benchmark of the static estimators ------------------------------------

struct SpatialRow {
  double r_z = 0.0;
  std::string method;
  double mean_error = 0.0;
  double std_error = 0.0;
  int failures = 0;
};

inline std::vector<SpatialRow> run_spatial_bench(const Config& c, const RunOptions& o) {
  const PathLossParams path = path_from(c);
  const EstimatorConfig est = estimators_from(c);
  PositionErrorProfile prof{c.get("spatial.sigma_p_min", 0.1), c.get("spatial.sigma_p_max", 3.0), false};
  prof.validate();
  const ErrorModel model = model_from(c, prof, o.seed);
  const double d_max = c.get("spatial.d_max", 50.0);
  const int n = c.get_int("spatial.n_anchors", 30);
  const double inner = c.get("crlb.shell_inner", 0.55);
  const int trials = o.trials_or(100);
  const std::vector<std::string> methods = {"ls", "wls", "ln1", "gd"};

  std::vector<SpatialRow> rows;
  for (double rz : c.get_list("spatial.rz_list", linear_grid(3.0, 29.0, 2.0))) {
    struct Out {
      double err[4];
      bool ok[4];
    };
    // every r_z cell replays the same trial streams
    auto res = parallel_trials(trials, mix_seed(o.seed, 0x5BA7), o.parallel, [&](int, Rng& trial) {
      Out out{};
      Rng g = trial.split(1), r = trial.split(2);
      const auto anchors = detail::cap_shell(n, d_max, rz, inner, g);
      std::vector<Beacon> bs;
      std::vector<double> sig;
      for (std::size_t i = 0; i < anchors.size(); ++i) {
        const double sp = prof.draw(r);
        Beacon b{sample_position(anchors[i], sp, r), sp, measure_distance(anchors[i].norm(), path, r),
                 static_cast<int>(i) + 1};
        sig.push_back(model.sigma_f(b.measured_distance, sp));
        bs.push_back(b);
      }
      const auto w = weights_from_sigma(sig);
      for (int m = 0; m < 4; ++m) {
        try {
          Vec3 p;
          if (m == 0)
            p = ls_estimate(bs);
          else if (m == 1)
            p = wls_estimate(bs, w);
          else if (m == 2)
            p = l1_estimate(bs, est.ln1);
          else
            p = gd_estimate(centroid(bs), bs, est.gd);
          out.err[m] = p.norm();
          out.ok[m] = std::isfinite(out.err[m]);
        } catch (const DegenerateGeometry&) {
          out.ok[m] = false;
        }
      }
      return out;
    });
    for (int m = 0; m < 4; ++m) {
      std::vector<double> e;
      int fail = 0;
      for (const auto& x : res) x.ok[m] ? e.push_back(x.err[m]) : void(++fail);
      rows.push_back({rz, methods[static_cast<std::size_t>(m)], detail::mean_of(e), detail::std_error_of(e), fail});
    }
  }
  return rows;
}

inline std::vector<std::string> cmd_spatial_bench(const Config& c, const RunOptions& o) {
  const auto rows = run_spatial_bench(c, o);
  CsvWriter w(detail::path_in(o, "spatial_bench.csv"), {"r_z_m", "method", "mean_error_m", "std_error_m", "failures"});
  for (const auto& r : rows) w.row({r.r_z, r.method, r.mean_error, r.std_error, static_cast<long long>(r.failures)});
  return {w.path()};
}

// ----- MAGD versus fixed step sizes -----------------------------------------------------

struct MagdBenchRow {
  int n_anchors = 0;
  std::string method;  // "fixed" or "magd"
  double alpha = 0.0;
  double mean_error = 0.0;
  double std_error = 0.0;
};

struct MagdBenchRun {
  std::vector<MagdBenchRow> rows;
  std::vector<MagdBenchRow> summary;  // averaged over the anchor counts, n_anchors = 0
};

inline MagdBenchRun run_magd_bench(const Config& c, const RunOptions& o) {
  const Setup s1 = setup_from(c, "setup1", setup1_defaults());
  const ErrorModel model = model_from(c, s1.profile, o.seed);
  const int trials = o.trials_or(50);
  std::vector<double> alphas = c.get_list("bench.alpha_list", linear_grid(0.1, 2.9, 0.1));
  alphas.insert(alphas.begin(), 0.0);  // 0 stands for MAGD
  MagdBenchRun out;
  const auto na_list = c.get_list("bench.na_list", {5, 10, 15, 20, 25, 30, 35, 40});
  for (double a : alphas) {
    std::vector<double> means;
    for (double na : na_list) {
      TrialConfig t;
      t.world = s1.world;
      t.world.n_anchors = static_cast<int>(na);
      t.world.n_malicious = 0;
      t.magd = magd_from(c);
      t.magd.fixed_alpha = a;
      t.weighted = c.get_bool("magd.weighted", true);
      t.defense.tad_cfg.sigma_p_min = s1.profile.min_sigma() > 0.0 ? s1.profile.min_sigma() : 0.1;
      const auto s = run_monte_carlo(t, model, trials, mix_seed(o.seed, static_cast<std::uint64_t>(na)), o.parallel);
      out.rows.push_back({t.world.n_anchors, a > 0.0 ? "fixed" : "magd", a, s.mean_error, s.std_error});
      means.push_back(s.mean_error);
    }
    out.summary.push_back({0, a > 0.0 ? "fixed" : "magd", a, detail::mean_of(means), detail::std_error_of(means)});
  }
  return out;
}

inline std::vector<std::string> cmd_magd_bench(const Config& c, const RunOptions& o) {
  const auto r = run_magd_bench(c, o);
  CsvWriter a(detail::path_in(o, "magd_bench.csv"), {"n_anchors", "method", "alpha", "mean_error_m", "std_error_m"});
  for (const auto& x : r.rows) a.row({static_cast<long long>(x.n_anchors), x.method, x.alpha, x.mean_error, x.std_error});
  CsvWriter b(detail::path_in(o, "magd_summary.csv"), {"method", "alpha", "mean_error_m", "spread_over_n_m"});
  for (const auto& x : r.summary) b.row({x.method, x.alpha, x.mean_error, x.std_error});
  return {a.path(), b.path()};
}

// ----- attack evaluation ---------------------------------------------------------------

struct CrlbAttackRow {
  std::string mode;
  double p_a, a_t, crlb1, crlb2, sigma_m, sigma_m_attacked;
};

struct EpsRow {
  std::string config;
  double eps_t, mean_err_tad, mean_err_tad_se, p_d, p_f, noattack, noad;
};

struct SensitivityRow {
  std::string mode;
  double p_a, a_t, eps_t, p_d, p_d_se, p_f, p_f_se;
};

struct AttackEvalRun {
  std::vector<CrlbAttackRow> crlb;
  std::vector<EffectivenessReport> effectiveness;  // per mode x strategy
  std::vector<EffectivenessReport> ed_sweeps;      // per mode, detector on
  std::vector<AttackOptimum> optima;
  std::vector<EpsRow> eps;
  std::vector<SensitivityRow> sensitivity;
};

// Which parts of the attack evaluation to run.
struct AttackEvalParts {
  bool crlb = true, effectiveness = true, ed = true, eps = true, sensitivity = true;
};

inline std::vector<CrlbAttackRow> run_crlb_attack(const Config& c, const RunOptions& o, const ErrorModel& model,
                                                  const Setup& s2) {
  std::vector<CrlbAttackRow> rows;
  const int reps = o.trials_or(100);
  const double cov = s2.world.coverage_radius;
  const int n = c.get_int("eval.n_anchors", 15);
  const double sm = model.coverage_table.sigma_m(cov);
  const auto samples = static_cast<std::size_t>(c.get_int("eval.sigma_samples", 200000));
  Rng rng(mix_seed(o.seed, 0xC21B));
  std::vector<std::vector<Vec3>> geoms;
  while (static_cast<int>(geoms.size()) < reps) {
    auto g = detail::uniform_ball(n, cov, rng);
    try {
      crlb_trace(fim(Vec3::Zero(), g, sm));
      geoms.push_back(std::move(g));
    } catch (const DegenerateGeometry&) {
    }
  }
  const std::vector<std::pair<std::string, double>> modes = {{"bias", c.get("eval.bias", 6.0)},
                                                            {"manipulation", c.get("eval.manipulation", 600.0)},
                                                            {"jamming", c.get("eval.jamming", 8.0)}};
  std::uint64_t tag = 0;
  for (const auto& [name, a] : modes) {
    const AttackMode mode = make_mode(name, a);
    Rng sr = rng.split(++tag);
    const double sma = name == "bias" ? sm : attacked_sigma_m(mode, model.path, model.profile, cov, samples, sr);
    for (double p : c.get_list("eval.crlb_pa_list", {0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75})) {
      double c1 = 0.0, c2 = 0.0;
      for (const auto& g : geoms) {
        c1 += crlb_trace(fim(Vec3::Zero(), g, sm));
        c2 += crlb2(mode, p, Vec3::Zero(), g, sm, sma);
      }
      rows.push_back({name, p, a, c1 / geoms.size(), c2 / geoms.size(), sm, sma});
    }
  }
  return rows;
}

inline AttackEvalRun run_attack_eval(const Config& c, const RunOptions& o, AttackEvalParts parts = {}) {
  AttackEvalRun out;
  const Setup s2 = setup_from(c, "setup2", setup2_defaults());
  const ErrorModel model = model_from(c, s2.profile, o.seed);
  const int trials = o.trials_or(100);
  TrialConfig base = setup2_trial(c, s2);
  base.world.n_malicious = 0;  // falsified share set per round instead

  if (parts.crlb) out.crlb = run_crlb_attack(c, o, model, s2);

  if (parts.effectiveness) {
    std::uint64_t k = 0;
    for (const std::string mode : {"bias", "manipulation"}) {
      const auto at_list = c.get_list(mode == "bias" ? "eval.eff_bias_list" : "eval.eff_manipulation_list",
                                      mode == "bias" ? std::vector<double>{2, 4, 6, 8}
                                                     : std::vector<double>{200, 400, 600, 800});
      std::vector<std::pair<double, double>> grid;
      for (double p : c.get_list("eval.eff_pa_list", {0.14, 0.28}))
        for (double a : at_list) grid.emplace_back(p, a);
      ++k;
      for (bool coord : {true, false}) {
        TrialConfig t = base;
        t.attack.strategy = strategy_from(c, coord);
        out.effectiveness.push_back(
            measure_effectiveness(t, model, mode, grid, true, trials, mix_seed(o.seed, 100 + k), o.parallel));
      }
    }
  }

  if (parts.ed) {
    const double p_a = c.get("eval.ed_p_a", 0.14);
    std::uint64_t k = 0;
    for (const std::string mode : {"manipulation", "bias"}) {
      const auto grid = c.get_list(mode == "bias" ? "eval.ed_bias_list" : "eval.ed_manipulation_list",
                                   mode == "bias" ? linear_grid(1.0, 10.0, 1.0) : linear_grid(100.0, 2000.0, 100.0));
      TrialConfig t = base;
      t.attack.strategy = strategy_from(c, false);
      out.optima.push_back(optimize_attack_param(t, model, mode, p_a, grid, trials, mix_seed(o.seed, 200 + ++k),
                                                 o.parallel));
      out.ed_sweeps.push_back(out.optima.back().sweep);
    }
  }

  if (parts.eps) {
    const double p_a = c.get("eval.eps_p_a", 0.14);
    const std::vector<std::pair<std::string, double>> cfgs = {
        {"manipulation", c.get("eval.eps_manipulation", 800.0)}, {"bias", c.get("eval.eps_bias", 8.0)}};
    std::uint64_t k = 0;
    for (const auto& [mode, a] : cfgs) {
      const std::uint64_t seed = mix_seed(o.seed, 300 + ++k);
      TrialConfig t = base;
      t.attack.strategy = strategy_from(c, false);
      t.attack.mode = make_mode(mode, a);
      t.attack.round_fraction = p_a;
      TrialConfig clean = t;
      clean.attack.enabled = false;
      const double noattack = run_monte_carlo(clean, model, trials, seed, o.parallel).mean_error;
      t.attack.enabled = true;
      const double noad = run_monte_carlo(t, model, trials, seed, o.parallel).mean_error;
      t.defense.tad = true;
      const std::string name = concat(mode, "_", a, "_pa", p_a);
      for (double e : c.get_list("eval.eps_list", linear_grid(0.80, 0.98, 0.02))) {
        t.defense.tad_cfg.eps_t = e;
        const auto s = run_monte_carlo(t, model, trials, seed, o.parallel);
        out.eps.push_back({name, e, s.mean_error, s.std_error, s.p_d, s.p_f, noattack, noad});
      }
    }
  }

  if (parts.sensitivity) {
    std::uint64_t k = 0;
    for (const std::string mode : {"manipulation", "bias"}) {
      const auto at_list = c.get_list(mode == "bias" ? "eval.sens_bias_list" : "eval.sens_manipulation_list",
                                      mode == "bias" ? std::vector<double>{2, 8} : std::vector<double>{200, 800});
      for (double p : c.get_list("eval.sens_pa_list", {0.14, 0.28}))
        for (double a : at_list)
          for (double e : c.get_list("eval.sens_eps_list", {0.80, 0.85, 0.90, 0.95, 0.98})) {
            TrialConfig t = base;
            t.attack.enabled = true;
            t.attack.strategy = strategy_from(c, false);
            t.attack.mode = make_mode(mode, a);
            t.attack.round_fraction = p;
            t.defense.tad = true;
            t.defense.tad_cfg.eps_t = e;
            const auto s = run_monte_carlo(t, model, trials, mix_seed(o.seed, 400 + ++k), o.parallel);
            const auto [pd, pf] = detail::per_trial_rates(s);
            out.sensitivity.push_back(
                {mode, p, a, e, s.p_d, detail::std_error_of(pd), s.p_f, detail::std_error_of(pf)});
          }
    }
  }
  return out;
}

inline std::vector<std::string> cmd_attack_eval(const Config& c, const RunOptions& o) {
  const auto r = run_attack_eval(c, o);
  CsvWriter a(detail::path_in(o, "crlb_attack.csv"),
              {"mode", "p_a", "A_t", "crlb1_m2", "crlb2_m2", "sigma_m", "sigma_m_attacked"});
  for (const auto& x : r.crlb) a.row({x.mode, x.p_a, x.a_t, x.crlb1, x.crlb2, x.sigma_m, x.sigma_m_attacked});

  const std::vector<std::string> eff_cols = {"p_a",      "A_t",          "mode", "strategy", "mean_err_noAD",
                                             "mean_err_TAD", "P_d",      "P_f",  "crlb_floor"};
  CsvWriter b(detail::path_in(o, "effectiveness.csv"), eff_cols);
  auto write_report = [](CsvWriter& w, const EffectivenessReport& rep) {
    w.row({0.0, 0.0, rep.mode, rep.strategy, rep.baseline, rep.baseline, 0.0, 0.0, 0.0});
    for (const auto& p : rep.points)
      w.row({p.p_a, p.a_t, rep.mode, rep.strategy, p.mean_err_noad, p.mean_err_tad, p.p_d, p.p_f, p.crlb_floor});
  };
  for (const auto& rep : r.effectiveness) write_report(b, rep);

  CsvWriter d(detail::path_in(o, "ed_sweep.csv"),
              {"mode", "p_a", "A_t", "mean_err_noAD", "mean_err_TAD", "E", "E_d", "P_d", "P_f", "crlb_floor"});
  for (const auto& rep : r.ed_sweeps)
    for (const auto& p : rep.points)
      d.row({rep.mode, p.p_a, p.a_t, p.mean_err_noad, p.mean_err_tad, p.e, p.e_d, p.p_d, p.p_f, p.crlb_floor});

  CsvWriter op(detail::path_in(o, "attack_optimum.csv"), {"mode", "p_a", "A_t_star", "E_d_star", "P_d_star", "boundary", "P_d_in_band"});
  for (const auto& x : r.optima)
    op.row({x.sweep.mode, x.sweep.points.front().p_a, x.a_t, x.e_d, x.p_d, static_cast<long long>(x.boundary),
            static_cast<long long>(x.p_d_in_band)});

  CsvWriter e(detail::path_in(o, "eps_sweep.csv"),
              {"config", "eps_t", "mean_err_TAD", "std_error", "P_d", "P_f", "mean_err_noattack", "mean_err_noAD"});
  for (const auto& x : r.eps) e.row({x.config, x.eps_t, x.mean_err_tad, x.mean_err_tad_se, x.p_d, x.p_f, x.noattack, x.noad});

  CsvWriter s(detail::path_in(o, "tad_sensitivity.csv"), {"mode", "p_a", "A_t", "eps_t", "P_d", "P_d_se", "P_f", "P_f_se"});
  for (const auto& x : r.sensitivity) s.row({x.mode, x.p_a, x.a_t, x.eps_t, x.p_d, x.p_d_se, x.p_f, x.p_f_se});
  return {a.path(), b.path(), d.path(), op.path(), e.path(), s.path()};
}

// ----- defense benchmark (TAD table and stalking with reputation sharing) ----------------

struct DefenseRow {
  std::string scenario;  // e.g. "coordinated_bias" or "no_attack"
  std::string defense;   // none, tad, tad_rp, tad_rp_falsified
  double mean_error = 0.0;
  double std_error = 0.0;
  double p_d = 0.0;
  double p_f = 0.0;
  double p_a = 0.0;
  double in_range = 0.0;
  std::vector<double> series;
};

struct DefenseBenchRun {
  std::vector<DefenseRow> tad;
  std::vector<DefenseRow> rp;
  std::vector<ReputationTraceRow> trace;  // first TAD+RP stalking trial
};

struct DefenseParts {
  bool tad = true, rp = true;
};

inline DefenseBenchRun run_defense_bench(const Config& c, const RunOptions& o, DefenseParts parts = {}) {
  DefenseBenchRun out;
  const Setup s2 = setup_from(c, "setup2", setup2_defaults());
  const ErrorModel model = model_from(c, s2.profile, o.seed);
  const int trials = o.trials_or(100);
  auto row = [](std::string sc, std::string def, const MonteCarloSummary& s) {
    return DefenseRow{std::move(sc), std::move(def), s.mean_error, s.std_error, s.p_d, s.p_f, s.p_a,
                      detail::mean_in_range(s), s.series};
  };

  if (parts.tad) {
    TrialConfig base = setup2_trial(c, s2);
    out.tad.push_back(row("no_attack", "none", run_monte_carlo(base, model, trials, mix_seed(o.seed, 1), o.parallel)));
    std::uint64_t k = 1;
    for (const std::string mode : {"manipulation", "bias"})
      for (bool coord : {true, false}) {
        TrialConfig t = base;
        t.attack.enabled = true;
        t.attack.mode = make_mode(mode, c.get(mode == "bias" ? "attack.bias" : "attack.manipulation",
                                              mode == "bias" ? 6.0 : 600.0));
        t.attack.strategy = strategy_from(c, coord);
        const std::uint64_t seed = mix_seed(o.seed, ++k);
        const std::string sc = concat(coord ? "coordinated_" : "random_", mode);
        out.tad.push_back(row(sc, "none", run_monte_carlo(t, model, trials, seed, o.parallel)));
        t.defense.tad = true;
        out.tad.push_back(row(sc, "tad", run_monte_carlo(t, model, trials, seed, o.parallel)));
      }
  }

  if (parts.rp) {
    TrialConfig t = setup2_trial(c, s2);
    t.world.n_malicious = c.get_int("rp.n_malicious", 3);
    t.world.malicious_follow = true;
    t.world.n_escorts = c.get_int("rp.n_escorts", 7);
    t.world.follow_radius = c.get("rp.follow_radius", 20.0);
    t.world.sim_duration = c.get_int("rp.steps", 100) * t.world.dt;
    t.world.validate();
    t.attack.mode = make_mode("bias", c.get("attack.bias", 6.0));
    t.attack.strategy.kind = Stalking{0};
    t.attack.strategy.attack_rate = c.get("attack.rate", 0.7);
    t.defense.n_uploaders = c.get_int("rp.uploaders", 10);
    const std::uint64_t seed = mix_seed(o.seed, 50);
    out.rp.push_back(row("stalking", "no_attack", run_monte_carlo(t, model, trials, seed, o.parallel)));
    t.attack.enabled = true;
    out.rp.push_back(row("stalking", "none", run_monte_carlo(t, model, trials, seed, o.parallel)));
    t.defense.tad = true;
    out.rp.push_back(row("stalking", "tad", run_monte_carlo(t, model, trials, seed, o.parallel)));
    t.defense.rp = true;
    out.rp.push_back(row("stalking", "tad_rp", run_monte_carlo(t, model, trials, seed, o.parallel)));
    {
      TrialConfig traced = t;
      traced.defense.record_trace = true;
      Rng r = Rng(seed).split(0);
      out.trace = run_trial(traced, model, r).trace;
    }
    t.defense.n_false_uploaders = c.get_int("rp.false_uploaders", 3);
    out.rp.push_back(row("stalking", "tad_rp_falsified", run_monte_carlo(t, model, trials, seed, o.parallel)));
  }
  return out;
}

inline std::vector<std::string> cmd_defense_bench(const Config& c, const RunOptions& o) {
  const auto r = run_defense_bench(c, o);
  const std::vector<std::string> cols = {"scenario", "defense", "mean_error_m", "std_error_m", "P_d",
                                         "P_f",      "p_a",     "mean_in_range"};
  CsvWriter a(detail::path_in(o, "tad_bench.csv"), cols);
  CsvWriter b(detail::path_in(o, "rp_bench.csv"), cols);
  CsvWriter s(detail::path_in(o, "defense_series.csv"), {"table", "scenario", "defense", "t", "mean_error_m"});
  auto emit = [&s](CsvWriter& w, const char* table, const std::vector<DefenseRow>& rows) {
    for (const auto& x : rows) {
      w.row({x.scenario, x.defense, x.mean_error, x.std_error, x.p_d, x.p_f, x.p_a, x.in_range});
      for (std::size_t i = 0; i < x.series.size(); ++i)
        s.row({std::string(table), x.scenario, x.defense, static_cast<long long>(i), x.series[i]});
    }
  };
  emit(a, "tad", r.tad);
  emit(b, "rp", r.rp);
  CsvWriter tr(detail::path_in(o, "reputation_trace.csv"), {"t", "observer", "anchor", "r_local", "r_effective", "flag"});
  for (const auto& x : r.trace)
    tr.row({static_cast<long long>(x.t), static_cast<long long>(x.observer), static_cast<long long>(x.anchor), x.r_local,
            x.r_effective, static_cast<long long>(x.flag)});
  return {a.path(), b.path(), s.path(), tr.path()};
}

}  // namespace uavloc
