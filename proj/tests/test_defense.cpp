#include "uavloc/uavloc.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace uavloc;

namespace {

// P(|X| <= x), X ~ N(mu, sigma^2), by Simpson on the folded density
double folded_cdf_oracle(double x, double mu, double sigma) {
  const int n = 20000;
  const double h = x / n;
  auto f = [&](double u) {
    const double a = (u - mu) / sigma, b = (u + mu) / sigma;
    return (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b)) / (sigma * std::sqrt(2.0 * kPi));
  };
  double acc = f(0) + f(x);
  for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

const ErrorModel& model() {
  static const ErrorModel m = ErrorModel::build({}, {0.1, 3.0, true}, 60.0, 61, 10000);
  return m;
}

}  // namespace

TEST(FoldedCdf, ValuesAndMonotone) {
  EXPECT_EQ(folded_abs_error_cdf(0.0, 0.0, 1.0), 0.0);
  EXPECT_NEAR(folded_abs_error_cdf(1.96 * 2.5, 0.0, 2.5), 0.95, 1e-4);
  EXPECT_NEAR(folded_abs_error_cdf(1.96 * 2.5, 0.0, 2.5), folded_cdf_oracle(1.96 * 2.5, 0.0, 2.5), 1e-10);
  EXPECT_NEAR(folded_abs_error_cdf(1.3, 0.4, 0.9), folded_cdf_oracle(1.3, 0.4, 0.9), 1e-10);
  double prev = 0.0;
  for (double x = 0.0; x < 20.0; x += 0.01) {
    const double v = folded_abs_error_cdf(x, 0.3, 1.2);
    EXPECT_GE(v, prev);
    EXPECT_LT(v, 1.0 + 1e-15);
    prev = v;
  }
  EXPECT_THROW(folded_abs_error_cdf(1.0, 0.0, 0.0), DomainError);
}

TEST(FoldedCdf, MatchesEmpiricalCdf) {
  for (double mu : {0.0, 0.8}) {
    Rng rng(62);
    const int n = 1000000;
    const double sigma = 1.7;
    std::vector<double> xs(n);
    for (auto& x : xs) x = std::abs(rng.normal(mu, sigma));
    std::sort(xs.begin(), xs.end());
    double sup = 0.0;
    for (int i = 0; i < n; i += 97) {
      const double f = folded_abs_error_cdf(xs[i], mu, sigma);
      sup = std::max({sup, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
    }
    EXPECT_LT(sup, 2e-3) << "mu " << mu;
  }
}

TEST(ForgetUpdate, PenaltyNeverBeatsReward) {
  Rng rng(63);
  for (int i = 0; i < 1000; ++i) {
    TadConfig c;
    c.gamma = rng.uniform(0.01, 1.0);
    c.lambda_r = rng.uniform(0.01, 1.0);
    c.lambda_p = -rng.uniform(0.01, 1.0);
    c.rule = rng.bernoulli(0.5) ? ForgetRule::verbatim : ForgetRule::anchored;
    const double r = rng.uniform();
    EXPECT_LE(forget_update(r, c.lambda_p, c), forget_update(r, c.lambda_r, c));
  }
}

// Verbatim rule, all rewards: r converges to min(1, (gamma - 1 + lambda_r) / (1 - gamma)).
TEST(ForgetUpdate, VerbatimRecoveryFixedPoint) {
  for (double gamma : {0.8, 0.85, 0.9, 0.95}) {
    TadConfig c;
    c.rule = ForgetRule::verbatim;
    c.gamma = gamma;
    c.lambda_r = 0.2;
    double r = 0.0;
    for (int k = 0; k < 500; ++k) {
      const double next = forget_update(r, c.lambda_r, c);
      EXPECT_GE(next, r);
      r = next;
    }
    EXPECT_NEAR(r, std::min(1.0, (gamma - 1.0 + 0.2) / (1.0 - gamma)), 1e-9) << gamma;
  }
}

TEST(ForgetUpdate, AnchoredKeepsFullTrust) {
  TadConfig c;
  c.rule = ForgetRule::anchored;
  EXPECT_EQ(forget_update(1.0, c.lambda_r, c), 1.0);
  EXPECT_NEAR(forget_update(1.0, c.lambda_p, c), 0.2, 1e-15);
  c.rule = ForgetRule::verbatim;
  EXPECT_EQ(forget_update(1.0, c.lambda_p, c), 0.0);
}

TEST(Tad, ConsistentBeaconIsRewarded) {
  const Vec3 p(1, 2, 3);
  const Vec3 a(20, 2, 3);
  // mu is read at the measured distance, so solve d = 19 + mu_f(d)
  double d = 19.0;
  for (int k = 0; k < 50; ++k) d = 19.0 + model().mu_f(d);
  ReputationLedger led(0);
  led.set(7, 0.5);
  const std::vector<Beacon> bs = {{a, 0.5, d, 7}};
  TadConfig cfg;
  cfg.rule = ForgetRule::anchored;
  const auto out = tad_update(led, p, bs, model(), cfg);
  ASSERT_EQ(out.flags.size(), 1u);
  EXPECT_FALSE(out.flags[0]);
  EXPECT_LT(out.xi[0], 1e-6);
  EXPECT_NEAR(led.get(7), 0.5 * (0.5 - 1.0) + 1.0 + 0.2, 1e-12);
}

// Manipulated beacon: tiny reported sigma_p is clamped to sigma_p,min, the
// corrected error is many sigmas out, and the verbatim rule with gamma = 0.5,
// lambda_p = -0.8 takes the score from 1 to max(0, 0.5 * 2 - 1 - 0.8) = 0.
TEST(Tad, ManipulatedBeaconIsPenalized) {
  TadConfig cfg;
  cfg.rule = ForgetRule::verbatim;
  cfg.sigma_p_min = std::sqrt(0.1);
  const Vec3 p = Vec3::Zero();
  const Vec3 shown(40, 18, -9);  // 44.8 m away, range says 30
  const double true_range = 30.0;
  const std::vector<Beacon> bs = {{shown, 1.0 / std::sqrt(600.0), true_range, 4}};
  ReputationLedger led(0);
  const auto out = tad_update(led, p, bs, model(), cfg, 0);
  EXPECT_GE(out.sigma[0], cfg.sigma_p_min);
  EXPECT_GT(out.xi[0], 0.95);
  EXPECT_TRUE(out.flags[0]);
  EXPECT_EQ(led.get(4), 0.0);
  EXPECT_EQ(led.last_update(4), 0);
}

TEST(Propagate, Examples) {
  ReputationLedger led(0);
  led.set(5, 1.0);   // uploader
  led.set(9, 1.0);   // anchor under review
  const std::vector<CloudReputationShare> one = {CloudReputationShare::from(5, {{9, 0.5}})};
  const std::vector<int> ids = {9};
  EXPECT_NEAR(propagate_reputation(led, one, ids).effective.at(9), 0.625, 1e-15);

  std::vector<CloudReputationShare> all;
  for (int u = 10; u < 15; ++u) all.push_back(CloudReputationShare::from(u, {{9, 1.0}}));
  EXPECT_EQ(propagate_reputation(led, all, ids).effective.at(9), 1.0);

  // an uploader never vouches for itself, the observer never for itself
  const std::vector<CloudReputationShare> self = {CloudReputationShare::from(9, {{9, 0.0}}),
                                                  CloudReputationShare::from(0, {{9, 0.0}})};
  const auto r = propagate_reputation(led, self, ids);
  EXPECT_EQ(r.effective.at(9), 1.0);
  EXPECT_TRUE(r.fallback);
}

TEST(Propagate, BoundedAndMeanReduction) {
  Rng rng(64);
  for (int i = 0; i < 1000; ++i) {
    ReputationLedger led(0);
    const double local = rng.uniform();
    led.set(1, local);
    const double trust = rng.uniform(0.1, 1.0);
    std::vector<CloudReputationShare> shares;
    double mean = 0.0;
    const int m = 1 + static_cast<int>(rng.index(9));
    for (int u = 0; u < m; ++u) {
      led.set(100 + u, trust);
      const double s = rng.uniform();
      mean += s / m;
      shares.push_back(CloudReputationShare::from(100 + u, {{1, s}}));
    }
    const std::vector<int> ids = {1};
    const double out = propagate_reputation(led, shares, ids).effective.at(1);
    // equal trust: r~ is the plain mean of the uploads
    EXPECT_NEAR(out, (mean * mean + local) / 2.0, 1e-12);
    EXPECT_GE(out, std::min(mean * mean, local) - 1e-15);
    EXPECT_LE(out, std::max(mean * mean, local) + 1e-15);
  }
}

TEST(CloudShare, ClampsOutOfRange) {
  const auto s = CloudReputationShare::from(3, {{1, -0.5}, {2, 1.7}, {4, 0.3}});
  EXPECT_TRUE(s.clamped);
  EXPECT_EQ(s.scores.at(1), 0.0);
  EXPECT_EQ(s.scores.at(2), 1.0);
  EXPECT_EQ(s.scores.at(4), 0.3);
}

TEST(TadConfig, Validation) {
  TadConfig c;
  c.lambda_p = 0.1;
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  c.eps_t = 1.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  c.gamma = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
}
