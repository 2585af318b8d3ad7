#include "uavloc/uavloc.hpp"

#include <gtest/gtest.h>

using namespace uavloc;

namespace {

Beacon sample_beacon() { return {Vec3(10, -4, 2), 0.7, 12.5, 3}; }

struct Bench {
  TrialConfig base;
  ErrorModel model;
};

const Bench& bench() {
  static const Bench b = [] {
    Config c;
    const Setup s = setup2_defaults();
    Bench out{setup2_trial(c, s), model_from(c, s.profile, 1)};
    out.base.world.n_malicious = 0;
    out.base.attack.strategy = strategy_from(c, false);
    return out;
  }();
  return b;
}

bool not_below(double hi, double hi_se, double lo, double lo_se) {
  return hi >= lo - 2.0 * std::sqrt(hi_se * hi_se + lo_se * lo_se);
}

}  // namespace

TEST(CorruptBeacon, BiasIsExactlyAdditive) {
  const Beacon in = sample_beacon();
  const Beacon copy = in;
  Rng rng(51);
  const Beacon out = corrupt_beacon(in, make_mode("bias", 3), rng);
  EXPECT_EQ(out.reported_position, in.reported_position + Vec3(3, 3, 3));
  EXPECT_EQ(out.measured_distance, in.measured_distance);
  EXPECT_EQ(out.reported_sigma_p, in.reported_sigma_p);
  EXPECT_EQ(out.anchor_id, in.anchor_id);
  EXPECT_EQ(in.reported_position, copy.reported_position);
  Rng other(999);
  EXPECT_EQ(corrupt_beacon(in, make_mode("bias", 3), other).reported_position, out.reported_position);
}

TEST(CorruptBeacon, ManipulationAndJamming) {
  const Beacon in = sample_beacon();
  Rng rng(52);
  const Beacon m = corrupt_beacon(in, make_mode("manipulation", 600), rng);
  EXPECT_NEAR(m.reported_sigma_p, 1.0 / std::sqrt(600.0), 1e-15);
  EXPECT_NEAR(m.reported_sigma_p, 0.0408, 1e-4);
  const Vec3 off = m.reported_position - in.reported_position;
  EXPECT_LE(off.cwiseAbs().maxCoeff(), std::sqrt(200.0));
  const Beacon j0 = corrupt_beacon(in, make_mode("jamming", 0), rng);
  EXPECT_EQ(j0.reported_position, in.reported_position);
  EXPECT_EQ(j0.measured_distance, in.measured_distance);
  EXPECT_EQ(j0.reported_sigma_p, in.reported_sigma_p);
  const Beacon j = corrupt_beacon(in, make_mode("jamming", 8), rng);
  EXPECT_GE(j.measured_distance, in.measured_distance);
  EXPECT_THROW(make_mode("teleport", 1), UsageError);
}

TEST(Schedule, ZeroRateNeverAttacks) {
  AttackPlan plan;
  plan.malicious_ids = {1, 2, 3};
  plan.strategy.attack_rate = 0.0;
  const std::vector<int> ids = {0, 1, 2, 3, 4};
  Rng rng(53);
  auto nb = [](int) { return std::vector<int>{0, 4}; };
  for (int t = 0; t < 100; ++t) EXPECT_TRUE(schedule_attacks(plan, t, ids, nb, rng).empty());
  plan.strategy.kind = GlobalCoordinated{2};
  for (int t = 0; t < 100; ++t) EXPECT_TRUE(schedule_attacks(plan, t, ids, nb, rng).empty());
}

TEST(Schedule, CoordinatedFrameRate) {
  AttackPlan plan;
  plan.strategy.kind = GlobalCoordinated{1};
  plan.strategy.attack_rate = 0.7;
  plan.seed = 54;
  int on = 0;
  for (int t = 0; t < 10000; ++t) on += coordinated_frame_active(plan, t);
  EXPECT_NEAR(on / 10000.0, 0.7, 0.02);

  // all attackers act together inside a frame
  plan.malicious_ids = {1, 2, 3, 4};
  const std::vector<int> ids = {0, 1, 2, 3, 4, 5};
  Rng rng(55);
  auto nb = [](int) { return std::vector<int>{0, 5}; };
  for (int t = 0; t < 200; ++t) {
    const auto pairs = schedule_attacks(plan, t, ids, nb, rng);
    EXPECT_TRUE(pairs.empty() || pairs.size() == 4u);
  }
}

TEST(Schedule, StalkingTargetsTheVictim) {
  AttackPlan plan;
  plan.malicious_ids = {1, 2, 3};
  plan.strategy.kind = Stalking{0};
  plan.strategy.attack_rate = 0.9;
  const std::vector<int> ids = {0, 1, 2, 3, 4};
  Rng rng(56);
  auto nb = [](int) { return std::vector<int>{4}; };
  for (int t = 0; t < 100; ++t)
    for (const auto& p : schedule_attacks(plan, t, ids, nb, rng)) EXPECT_EQ(p.target, 0);
  plan.strategy.kind = Stalking{9};
  EXPECT_THROW(schedule_attacks(plan, 0, ids, nb, rng), UsageError);
}

TEST(AttackedSigma, GrowsWithManipulationIndex) {
  Rng a(57), b(57);
  const PositionErrorProfile prof{0.1, 3.0};
  const double lo = attacked_sigma_m(make_mode("manipulation", 100), {}, prof, 50, 50000, a);
  const double hi = attacked_sigma_m(make_mode("manipulation", 1000), {}, prof, 50, 50000, b);
  EXPECT_GT(hi, lo);
}

TEST(Effectiveness, NoAttackMeansNoInflation) {
  const auto& b = bench();
  const auto rep = measure_effectiveness(b.base, b.model, "manipulation", {{0.0, 800}, {0.14, 0.0}}, true, 60, 3);
  for (const auto& p : rep.points) {
    EXPECT_LE(std::abs(p.e), 2.0 * std::sqrt(p.mean_err_noad_se * p.mean_err_noad_se + rep.baseline_se * rep.baseline_se))
        << p.p_a << " " << p.a_t;
  }
}

TEST(Effectiveness, MonotoneTrendsAndDetectionHelps) {
  const auto& b = bench();
  const int trials = 60;
  const auto by_pa =
      measure_effectiveness(b.base, b.model, "manipulation", {{0.07, 800}, {0.14, 800}, {0.28, 800}}, true, trials, 4);
  const auto by_at =
      measure_effectiveness(b.base, b.model, "manipulation", {{0.14, 100}, {0.14, 400}, {0.14, 1600}}, true, trials, 4);
  for (const auto* rep : {&by_pa, &by_at}) {
    const auto& p = rep->points;
    for (std::size_t i = 1; i < p.size(); ++i)
      EXPECT_TRUE(not_below(p[i].mean_err_noad, p[i].mean_err_noad_se, p[i - 1].mean_err_noad, p[i - 1].mean_err_noad_se))
          << i;
    for (const auto& x : p) EXPECT_LE(x.e_d, x.e + 2.0 * x.mean_err_tad_se) << x.p_a << " " << x.a_t;
  }
  // detection rate rises with the attack parameter and falls with the rate
  for (std::size_t i = 1; i < 3; ++i) {
    EXPECT_TRUE(not_below(by_at.points[i].p_d, by_at.points[i].p_d_se, by_at.points[i - 1].p_d, by_at.points[i - 1].p_d_se));
    EXPECT_TRUE(not_below(by_pa.points[i - 1].p_d, by_pa.points[i - 1].p_d_se, by_pa.points[i].p_d, by_pa.points[i].p_d_se));
  }
}

TEST(Optimize, SinglePointAndBoundary) {
  const auto& b = bench();
  const auto one = optimize_attack_param(b.base, b.model, "bias", 0.14, {4.0}, 20, 5);
  EXPECT_EQ(one.a_t, 4.0);
  EXPECT_FALSE(one.boundary);
  const auto edge = optimize_attack_param(b.base, b.model, "bias", 0.14, {1.0, 3.0, 6.0, 10.0}, 40, 5);
  EXPECT_TRUE(edge.boundary);
  EXPECT_EQ(edge.a_t, 10.0);
  EXPECT_THROW(optimize_attack_param(b.base, b.model, "bias", 0.14, {}, 20, 5), UsageError);
  EXPECT_THROW(optimize_attack_param(b.base, b.model, "bias", 0.6, {1.0}, 20, 5), UsageError);
}

TEST(Optimize, ManipulationReportsDetectionRate) {
  const auto& b = bench();
  const auto opt = optimize_attack_param(b.base, b.model, "manipulation", 0.14, {200, 600, 1000, 1400, 1800}, 40, 6);
  EXPECT_GT(opt.p_d, 0.0);
  EXPECT_LT(opt.p_d, 1.0);
  EXPECT_EQ(opt.sweep.points.size(), 5u);
}
