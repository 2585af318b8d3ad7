#pragma once

// Position estimators working on anchor beacons: linearized least squares
// (plain and weighted), an l1 plane fit, plain gradient descent on the l1
// ranging loss, and the mobility-adaptive variant with per-anchor weights,
// reputations and a learning rate that is carried across timesteps.

#include "uavloc/core.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace uavloc {

struct Beacon {
  Vec3 reported_position = Vec3::Zero();
  double reported_sigma_p = 0.1;
  double measured_distance = 1.0;
  int anchor_id = -1;
};

struct Ln1Config {
  int k_max = 300;
  double rho = 0.3;
  double theta = 1e-3;
};

struct GdConfig {
  int k_max = 50;
  double alpha0 = 1.5;
  double beta = 0.8;
  double theta = 1e-5;
};

struct MagdConfig {
  double eps_max_t0 = 50.0;
  double eps_min_t0 = 5.0;
  double beta1 = 0.5;
  double beta2 = 0.05;
  double momentum = 1e-5;
  double theta = 1e-8;
  int k_max = 30;
  int phi = 5;
  double step3_ratio = 0.3;
  double step4_ratio = 1.3;
  // > 0 freezes the base rate (Steps 1, 3 and 4 off) and reduces it within a
  // timestep by `fixed_beta` instead of beta1. Used for fixed step-size runs.
  double fixed_alpha = 0.0;
  double fixed_beta = 0.8;
};

struct EstimatorConfig {
  Ln1Config ln1;
  GdConfig gd;
  MagdConfig magd;

  void validate() const {
    if (ln1.k_max < 1 || !(ln1.rho > 0.0) || !(ln1.theta > 0.0))
      throw DomainError("LN-1 parameters must be positive");
    if (gd.k_max < 1 || !(gd.alpha0 > 0.0) || !(gd.theta > 0.0) || !(gd.beta > 0.0 && gd.beta < 1.0))
      throw DomainError("GD parameters out of range");
    const auto& m = magd;
    if (!(m.beta1 > 0.0 && m.beta1 < 1.0)) throw DomainError("beta1 must lie in (0,1)");
    if (!(m.beta2 >= 0.0)) throw DomainError("beta2 must be non-negative");
    if (!(m.eps_min_t0 > 0.0 && m.eps_min_t0 < m.eps_max_t0))
      throw DomainError("need 0 < eps_min_t0 < eps_max_t0");
    if (!(m.theta > 0.0) || m.k_max < 1 || m.phi < 1) throw DomainError("MAGD thresholds must be positive");
    if (!(m.fixed_beta > 0.0 && m.fixed_beta < 1.0)) throw DomainError("fixed_beta must lie in (0,1)");
  }
};

inline Vec3 centroid(std::span<const Beacon> beacons) {
  Vec3 c = Vec3::Zero();
  for (const auto& b : beacons) c += b.reported_position;
  return beacons.empty() ? c : Vec3(c / static_cast<double>(beacons.size()));
}

// w_n = max(sigma) / sigma_n.
inline std::vector<double> weights_from_sigma(std::span<const double> sigma_f) {
  std::vector<double> w(sigma_f.size());
  if (sigma_f.empty()) return w;
  for (double s : sigma_f)
    if (!(s > 0.0)) throw DomainError("sigma_f must be positive; clamp by sigma_p,min first");
  const double mx = *std::max_element(sigma_f.begin(), sigma_f.end());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = mx / sigma_f[i];
  return w;
}

// ----- linearized solvers --------------------------------------------------

namespace detail {

// Rows [-2x_n, -2y_n, -2z_n, 1], rhs d_n^2 - |p_n|^2, both in a frame centered
// on the anchor centroid so the normal equations stay well conditioned.
struct LinearSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Vec3 origin;
};

inline LinearSystem linear_system(std::span<const Beacon> beacons) {
  LinearSystem s;
  s.origin = centroid(beacons);
  const auto n = static_cast<Eigen::Index>(beacons.size());
  s.a.resize(n, 4);
  s.b.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& bc = beacons[static_cast<std::size_t>(i)];
    const Vec3 p = bc.reported_position - s.origin;
    s.a(i, 0) = -2.0 * p.x();
    s.a(i, 1) = -2.0 * p.y();
    s.a(i, 2) = -2.0 * p.z();
    s.a(i, 3) = 1.0;
    s.b(i) = bc.measured_distance * bc.measured_distance - p.squaredNorm();
  }
  return s;
}

inline void check_rank(const Eigen::Matrix4d& ata) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(ata, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || !(lo > 1e-12 * hi))
    throw DegenerateGeometry(concat("rank-deficient anchor geometry (eig ratio ", lo / hi, ")"), 0.0,
                             lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
}

inline void require_beacons(std::span<const Beacon> beacons, std::size_t n) {
  if (beacons.size() < n)
    throw DegenerateGeometry(concat("need at least ", n, " beacons, got ", beacons.size()));
}

}  // namespace detail

inline Vec3 wls_estimate(std::span<const Beacon> beacons, std::span<const double> weights) {
  detail::require_beacons(beacons, 4);
  if (weights.size() != beacons.size()) throw UsageError("one weight per beacon required");
  const double wmax = *std::max_element(weights.begin(), weights.end());
  for (double w : weights)
    if (!(w > 0.0)) throw DomainError("weights must be positive");
  auto sys = detail::linear_system(beacons);
  Eigen::VectorXd w(sys.b.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = weights[static_cast<std::size_t>(i)] / wmax;
  const Eigen::Matrix4d ata = sys.a.transpose() * w.asDiagonal() * sys.a;
  detail::check_rank(ata);
  const Eigen::Vector4d atb = sys.a.transpose() * w.asDiagonal() * sys.b;
  const Eigen::Vector4d u = ata.ldlt().solve(atb);
  return sys.origin + u.head<3>();
}

inline Vec3 ls_estimate(std::span<const Beacon> beacons) {
  std::vector<double> ones(beacons.size(), 1.0);
  return wls_estimate(beacons, ones);
}

struct L1Result {
  Vec3 position;
  int iterations = 0;
  bool converged = false;
};

// Least absolute deviations on the linear system via ADMM:
//   min |z|_1  s.t.  A u - b = z,
// started from the least-squares solution. Each u-update is an exact
// least-squares solve, the z-update soft-thresholds at 1/rho.
inline L1Result l1_estimate_ex(std::span<const Beacon> beacons, const Ln1Config& cfg) {
  detail::require_beacons(beacons, 4);
  auto sys = detail::linear_system(beacons);
  const Eigen::Matrix4d ata = sys.a.transpose() * sys.a;
  detail::check_rank(ata);
  const auto solver = ata.ldlt();
  Eigen::Vector4d u = solver.solve(sys.a.transpose() * sys.b);
  Eigen::VectorXd z = sys.a * u - sys.b;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(z.size());
  const double kappa = 1.0 / cfg.rho;
  L1Result out;
  for (int k = 1; k <= cfg.k_max; ++k) {
    const Eigen::VectorXd v = sys.a * u - sys.b + y;
    z = v.unaryExpr([kappa](double x) { return std::copysign(std::max(std::abs(x) - kappa, 0.0), x); });
    const Eigen::Vector4d u_next = solver.solve(sys.a.transpose() * (sys.b + z - y));
    y += sys.a * u_next - sys.b - z;
    const double step = (u_next.head<3>() - u.head<3>()).norm();
    u = u_next;
    out.iterations = k;
    if (step < cfg.theta) {
      out.converged = true;
      break;
    }
  }
  out.position = sys.origin + u.head<3>();
  return out;
}

inline Vec3 l1_estimate(std::span<const Beacon> beacons, const Ln1Config& cfg) {
  return l1_estimate_ex(beacons, cfg).position;
}

// ----- gradient descent on the ranging loss ---------------------------------

// sum_n w_n |(|p - p_n| - d_n + mu_n)|, and its subgradient. Empty spans mean
// unit weights and zero offsets.
struct RangingLoss {
  std::span<const Beacon> beacons;
  std::span<const double> weights = {};
  std::span<const double> mu = {};

  double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }
  double offset(std::size_t i) const { return mu.empty() ? 0.0 : mu[i]; }

  double residual(const Vec3& p, std::size_t i) const {
    const auto& b = beacons[i];
    return (p - b.reported_position).norm() - b.measured_distance + offset(i);
  }

  double value(const Vec3& p) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < beacons.size(); ++i) acc += weight(i) * std::abs(residual(p, i));
    return acc;
  }

  Vec3 gradient(const Vec3& p) const {
    Vec3 g = Vec3::Zero();
    for (std::size_t i = 0; i < beacons.size(); ++i) {
      const Vec3 diff = p - beacons[i].reported_position;
      const double d = diff.norm();
      if (d <= 0.0) continue;
      const double r = residual(p, i);
      const double s = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
      g += weight(i) * s * diff / d;
    }
    return g;
  }
};

inline double l1_ranging_loss(const Vec3& p, std::span<const Beacon> beacons) {
  return RangingLoss{beacons}.value(p);
}

inline Vec3 l1_ranging_gradient(const Vec3& p, std::span<const Beacon> beacons) {
  return RangingLoss{beacons}.gradient(p);
}

// Normalized-step descent; a step that raises the loss is discarded and the
// step size shrinks by beta.
inline Vec3 gd_estimate(const Vec3& initial, std::span<const Beacon> beacons, const GdConfig& cfg) {
  if (beacons.empty()) return initial;
  const RangingLoss loss{beacons};
  Vec3 p = initial;
  double f = loss.value(p);
  double alpha = cfg.alpha0;
  for (int k = 0; k < cfg.k_max && f > 0.0; ++k) {
    const Vec3 g = loss.gradient(p);
    const double gn = g.norm();
    if (gn == 0.0) break;
    const Vec3 cand = p - alpha * g / gn;
    const double fc = loss.value(cand);
    if (fc > f) {
      alpha *= cfg.beta;
      if (alpha < cfg.theta) break;
      continue;
    }
    const double gain = f - fc;
    p = cand;
    f = fc;
    if (gain < cfg.theta) break;
  }
  return p;
}

// ----- MAGD -----------------------------------------------------------------

struct MagdState {
  double alpha_hat = 0.0;  // base learning rate carried between timesteps
  Vec3 p_hat = Vec3::Zero();
  bool has_estimate = false;
  std::vector<double> dbar_history;
  double dbar_mean = 0.0;
  std::vector<double> v_history;
  double v_mean = 0.0;
  double last_rho = 0.0;
  int t = 0;
  bool flagged_empty = false;
};

// Step 1 rate; also the ceiling for later growth.
inline double magd_alpha_ceiling(const MagdConfig& cfg, double n) {
  return std::max(cfg.eps_max_t0 / n, cfg.eps_min_t0);
}

// Weighted mean absolute distance difference, the stand-in for the loss.
inline double magd_dbar(const Vec3& p, std::span<const Beacon> beacons, std::span<const double> w,
                        std::span<const double> r, std::span<const double> mu) {
  double acc = 0.0;
  for (std::size_t i = 0; i < beacons.size(); ++i) {
    const double res = (p - beacons[i].reported_position).norm() - beacons[i].measured_distance + mu[i];
    acc += std::abs(res) * w[i] * r[i];
  }
  return acc / static_cast<double>(beacons.size());
}

inline Vec3 magd_gradient(const Vec3& p, std::span<const Beacon> beacons, std::span<const double> w,
                          std::span<const double> r, std::span<const double> mu) {
  Vec3 g = Vec3::Zero();
  for (std::size_t i = 0; i < beacons.size(); ++i) {
    const Vec3 diff = p - beacons[i].reported_position;
    const double d = diff.norm();
    if (d <= 0.0) continue;
    g += diff * (w[i] * r[i] / d) * (d - beacons[i].measured_distance + mu[i]);
  }
  return g;
}

// One timestep. Reputations, weights and mu may be empty (meaning 1, 1, 0).
// The estimate is seeded from the anchor centroid the first time beacons
// arrive. dt is the time since the previous call.
inline void magd_step(MagdState& s, std::span<const Beacon> beacons, std::span<const double> reputations,
                      std::span<const double> weights, std::span<const double> mu, const MagdConfig& cfg,
                      double dt = 1.0) {
  s.flagged_empty = beacons.empty();
  if (beacons.empty()) return;
  const std::size_t n = beacons.size();
  auto fill = [n](std::span<const double> in, double dflt) {
    if (!in.empty() && in.size() != n) throw UsageError("per-beacon vector has wrong length");
    return in.empty() ? std::vector<double>(n, dflt) : std::vector<double>(in.begin(), in.end());
  };
  const auto r = fill(reputations, 1.0), w = fill(weights, 1.0), m = fill(mu, 0.0);
  const double nn = static_cast<double>(n);
  const bool fixed = cfg.fixed_alpha > 0.0;

  if (!s.has_estimate) {
    s.p_hat = centroid(beacons);
    s.has_estimate = true;
  }
  if (s.t == 0) s.alpha_hat = fixed ? cfg.fixed_alpha : magd_alpha_ceiling(cfg, nn);

  const Vec3 p_prev = s.p_hat;
  double alpha = s.alpha_hat;
  const double shrink = fixed ? cfg.fixed_beta : cfg.beta1;
  Vec3 p = s.p_hat;
  double dbar = magd_dbar(p, beacons, w, r, m);
  for (int k = 0; k < cfg.k_max; ++k) {
    const Vec3 g = magd_gradient(p, beacons, w, r, m);
    const double gn = g.norm();
    if (gn == 0.0) break;
    const Vec3 cand = p + cfg.momentum * p - (alpha / nn) * g / gn;
    const double dc = magd_dbar(cand, beacons, w, r, m);
    if (dc > dbar) {
      alpha *= shrink;
      if (alpha / nn < cfg.theta) break;
      continue;
    }
    const double gain = dbar - dc;
    p = cand;
    dbar = dc;
    if (gain < cfg.theta) break;
  }
  s.p_hat = p;

  s.dbar_history.push_back(dbar);
  const double tcount = static_cast<double>(s.dbar_history.size());
  s.dbar_mean += (dbar - s.dbar_mean) / tcount;

  const double v = s.t == 0 ? 0.0 : (p - p_prev).norm() / dt;
  if (s.t > 0) {
    s.v_history.push_back(v);
    s.v_mean += (v - s.v_mean) / static_cast<double>(s.v_history.size());
  }

  if (!fixed && s.t > 0) {
    // Step 3: stable loss, shrink toward the floor.
    if (s.dbar_mean > 0.0 && std::abs(dbar - s.dbar_mean) / s.dbar_mean <= cfg.step3_ratio)
      s.alpha_hat = std::max(s.alpha_hat - cfg.beta2, cfg.eps_min_t0 / nn);
    // Step 4: loss rising faster than speed, widen the rate. Window means
    // keep a single stalled step from dominating the ratio.
    const auto win = static_cast<std::size_t>(cfg.phi);
    s.last_rho = 0.0;
    if (s.v_history.size() >= win && s.dbar_mean > 0.0 && s.v_mean > 0.0) {
      double dsum = 0.0, vsum = 0.0;
      const std::size_t nv = s.v_history.size(), nd = s.dbar_history.size();
      for (std::size_t j = 0; j < win; ++j) {
        dsum += s.dbar_history[nd - 1 - j];
        vsum += s.v_history[nv - 1 - j];
      }
      const double d_ratio = dsum / static_cast<double>(win) / s.dbar_mean;
      const double v_ratio = std::max(vsum / static_cast<double>(win) / s.v_mean, 1e-6);
      s.last_rho = std::sqrt(d_ratio / v_ratio);
      if (s.last_rho > cfg.step4_ratio) s.alpha_hat *= s.last_rho;
    }
    s.alpha_hat = std::min(s.alpha_hat, magd_alpha_ceiling(cfg, nn));
  }
  ++s.t;
}

}  // namespace uavloc
