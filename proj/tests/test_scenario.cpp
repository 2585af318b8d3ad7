#include "uavloc/uavloc.hpp"

#include <gtest/gtest.h>

using namespace uavloc;

namespace {

const ErrorModel& model() {
  static const ErrorModel m = ErrorModel::build({}, {0.1, 3.0, true}, 60.0, 71, 10000);
  return m;
}

TrialConfig small_trial() {
  TrialConfig t;
  t.world = setup1_defaults().world;
  t.world.sim_duration = 5.0;
  return t;
}

TrialConfig setup2_plain() {
  Config c;
  return setup2_trial(c, setup2_defaults());
}

}  // namespace

TEST(World, SameSeedSameTrajectories) {
  TrialConfig cfg = small_trial();
  Rng a(81), b(81);
  const auto ra = run_trial(cfg, model(), a);
  const auto rb = run_trial(cfg, model(), b);
  EXPECT_EQ(ra.errors, rb.errors);
  EXPECT_EQ(ra.n_beacons, rb.n_beacons);
  Rng c(82);
  EXPECT_NE(run_trial(cfg, model(), c).errors, ra.errors);
}

TEST(World, StepNeverExceedsSpeedTimesDt) {
  for (const auto& setup : {setup1_defaults(), setup2_defaults()}) {
    WorldConfig wc = setup.world;
    wc.n_escorts = 3;
    wc.malicious_follow = true;
    Rng rng(83);
    World w = init_world(wc, rng);
    for (int k = 0; k < 200; ++k) {
      std::vector<Vec3> before;
      std::vector<double> speed;
      for (const auto& u : w.uavs) before.push_back(u.position), speed.push_back(u.speed);
      step_world(w, wc.dt, rng);
      for (std::size_t i = 0; i < w.uavs.size(); ++i)
        ASSERT_LE((w.uavs[i].position - before[i]).norm(), speed[i] * wc.dt + 1e-9) << i;
    }
  }
}

TEST(World, StationaryUavStaysPut) {
  WorldConfig wc = setup1_defaults().world;
  wc.target_speed_min = wc.target_speed_max = 0.0;
  Rng rng(84);
  World w = init_world(wc, rng);
  const Vec3 start = w.uav(0).position;
  for (int k = 0; k < 100; ++k) step_world(w, wc.dt, rng);
  EXPECT_EQ(w.uav(0).position, start);
}

TEST(World, SpeedsFollowTheConfiguredRange) {
  WorldConfig wc = setup2_defaults().world;
  Rng rng(85);
  double sum = 0.0;
  int n = 0;
  for (int k = 0; k < 200; ++k) {
    const World w = init_world(wc, rng);
    for (const auto& u : w.uavs) {
      if (u.id == 0) continue;
      EXPECT_GE(u.speed, wc.speed_min);
      EXPECT_LE(u.speed, wc.speed_max);
      sum += u.speed;
      ++n;
    }
  }
  EXPECT_NEAR(sum / n, 0.5 * (wc.speed_min + wc.speed_max), 0.03);
}

TEST(World, MaliciousShareIsExact) {
  const WorldConfig wc = setup2_defaults().world;
  Rng rng(86);
  for (int k = 0; k < 20; ++k) {
    const World w = init_world(wc, rng);
    EXPECT_EQ(w.malicious_ids().size(), 33u);
    EXPECT_EQ(w.malicious_ids().count(0), 0u);
    EXPECT_DOUBLE_EQ(static_cast<double>(w.malicious_ids().size()) / wc.n_anchors, 0.33);
  }
  WorldConfig bad = wc;
  bad.n_malicious = 101;
  EXPECT_THROW(init_world(bad, rng), UsageError);
}

TEST(World, Setup2SeesAboutFifteenAnchors) {
  const auto s = run_monte_carlo(setup2_plain(), model(), 20, 87);
  const double nb = detail::mean_in_range(s);
  EXPECT_NEAR(nb, 15.0, 2.0);
}

TEST(Trial, ZeroCoverageHasNoBeacons) {
  TrialConfig cfg = small_trial();
  cfg.world.coverage_radius = 0.0;
  Rng rng(88);
  const auto r = run_trial(cfg, model(), rng);
  EXPECT_TRUE(r.errors.empty());
  EXPECT_EQ(r.skipped, cfg.world.steps());
  for (int n : r.n_beacons) EXPECT_EQ(n, 0);
  EXPECT_EQ(r.mean_error, 0.0);
}

TEST(Trial, MeanErrorIsMeanOfSeries) {
  TrialConfig cfg = small_trial();
  Rng rng(89);
  const auto r = run_trial(cfg, model(), rng);
  ASSERT_FALSE(r.errors.empty());
  double s = 0.0;
  for (double e : r.errors) s += e;
  EXPECT_NEAR(r.mean_error, s / r.errors.size(), 1e-12);
  EXPECT_EQ(r.errors.size() + static_cast<std::size_t>(r.skipped), static_cast<std::size_t>(cfg.world.steps()));
}

TEST(MonteCarlo, AggregateMatchesSeriesMean) {
  const auto s = run_monte_carlo(small_trial(), model(), 30, 90);
  for (const auto& r : s.results) ASSERT_EQ(r.errors.size(), s.series.size());
  double m = 0.0;
  for (double e : s.series) m += e;
  EXPECT_NEAR(s.mean_error, m / s.series.size(), 1e-12);
}

TEST(MonteCarlo, SingleTrialIsRunTrial) {
  const TrialConfig cfg = small_trial();
  const auto s = run_monte_carlo(cfg, model(), 1, 91);
  Rng r = Rng(91).split(0);
  const auto one = run_trial(cfg, model(), r);
  EXPECT_EQ(s.results[0].errors, one.errors);
  EXPECT_EQ(s.mean_error, one.mean_error);
  EXPECT_EQ(s.std_error, 0.0);
  EXPECT_THROW(run_monte_carlo(cfg, model(), 0, 91), UsageError);
}

TEST(MonteCarlo, ParallelMatchesSerial) {
  const TrialConfig cfg = small_trial();
  const auto a = run_monte_carlo(cfg, model(), 12, 92, 1);
  const auto b = run_monte_carlo(cfg, model(), 12, 92, 3);
  EXPECT_EQ(a.mean_error, b.mean_error);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.series, b.series);
}

// Full-length runs, since the 5 s trials have a heavy tail from bad opening
// geometry. Same seed: the longer run extends the shorter one.
TEST(MonteCarlo, StandardErrorShrinksWithTrials) {
  TrialConfig cfg;
  cfg.world = setup1_defaults().world;
  const auto a = run_monte_carlo(cfg, model(), 150, 93);
  const auto b = run_monte_carlo(cfg, model(), 300, 93);
  for (int i = 0; i < 150; ++i) ASSERT_EQ(a.results[i].mean_error, b.results[i].mean_error);
  EXPECT_NEAR(a.std_error / b.std_error, std::sqrt(2.0), 0.2 * std::sqrt(2.0));
}

TEST(Trial, ReputationTraceLeavesResultsUnchanged) {
  Config c;
  TrialConfig cfg = setup2_trial(c, setup2_defaults());
  cfg.world.sim_duration = 5.0;
  cfg.world.n_malicious = 3;
  cfg.world.malicious_follow = true;
  cfg.world.n_escorts = 4;
  cfg.attack.enabled = true;
  cfg.attack.mode = make_mode("bias", 6.0);
  cfg.attack.strategy.kind = Stalking{0};
  cfg.defense.tad = true;
  cfg.defense.rp = true;
  cfg.defense.n_uploaders = 5;
  Rng a(95), b(95);
  const auto plain = run_trial(cfg, model(), a);
  cfg.defense.record_trace = true;
  const auto traced = run_trial(cfg, model(), b);
  EXPECT_EQ(plain.errors, traced.errors);
  EXPECT_TRUE(plain.trace.empty());
  ASSERT_FALSE(traced.trace.empty());
  std::set<int> observers;
  for (const auto& row : traced.trace) {
    observers.insert(row.observer);
    EXPECT_GE(row.r_local, 0.0);
    EXPECT_LE(row.r_local, 1.0);
    EXPECT_GE(row.r_effective, 0.0);
    EXPECT_LE(row.r_effective, 1.0);
    EXPECT_NE(row.observer, row.anchor);
    if (row.t > 0) EXPECT_NE(row.flag, -1);
    if (row.observer != 0) EXPECT_EQ(row.r_local, row.r_effective);
  }
  EXPECT_EQ(observers.size(), 6u);
}
