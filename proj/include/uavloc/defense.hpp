#pragma once

// Trust-aware anomaly detection and reputation propagation.
//
// Each observer keeps a reputation per anchor. Every timestep the beacon of
// an anchor is checked against the current estimate: the absolute distance
// error is placed on the folded-normal CDF of the modeled error, and the
// reputation is rewarded or penalized through a forgetting update.

#include "uavloc/errormodel.hpp"
#include "uavloc/estimators.hpp"

#include <functional>
#include <map>
#include <span>
#include <vector>

namespace uavloc {

// How the reputation is updated from its previous value.
//   verbatim: r <- gamma (r + 1) - 1 + r_hat
//   anchored: r <- gamma (r - 1) + 1 + r_hat   (full trust is the fixed point)
enum class ForgetRule { verbatim, anchored };

struct TadConfig {
  double lambda_r = 0.2;
  double lambda_p = -0.8;
  double gamma = 0.5;
  double eps_t = 0.95;
  double sigma_p_min = 0.1;
  // true: penalize when xi > eps_t (observation deep in the tail).
  // false: the opposite comparison, rewarding xi > eps_t.
  bool penalize_above = true;
  ForgetRule rule = ForgetRule::verbatim;

  void validate() const {
    if (!(lambda_p < 0.0 && 0.0 < lambda_r)) throw DomainError("need lambda_p < 0 < lambda_r");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
    if (!(eps_t > 0.0 && eps_t < 1.0)) throw DomainError("eps_t must lie in (0, 1)");
    if (!(sigma_p_min > 0.0)) throw DomainError("sigma_p_min must be positive");
  }
};

// P(|E| <= x) for E ~ N(mu, sigma^2).
inline double folded_abs_error_cdf(double x, double mu, double sigma) {
  if (!(sigma > 0.0)) throw DomainError(concat("sigma_f must be positive, got ", sigma));
  if (x <= 0.0) return 0.0;
  const double v = normal_cdf((x - mu) / sigma) - normal_cdf((-x - mu) / sigma);
  return std::clamp(v, 0.0, 1.0);
}

inline double clamp01(double r) { return std::min(1.0, std::max(0.0, r)); }

class ReputationLedger {
 public:
  explicit ReputationLedger(int owner = 0) : owner_(owner) {}

  int owner() const { return owner_; }

  // Unknown anchors start at full trust.
  double get(int id) const {
    auto it = scores_.find(id);
    return it == scores_.end() ? 1.0 : it->second;
  }
  bool contains(int id) const { return scores_.count(id) != 0; }
  void set(int id, double r, int t = -1) {
    scores_[id] = clamp01(r);
    last_update_[id] = t;
  }
  const std::map<int, double>& scores() const { return scores_; }
  int last_update(int id) const {
    auto it = last_update_.find(id);
    return it == last_update_.end() ? -1 : it->second;
  }

 private:
  int owner_;
  std::map<int, double> scores_;
  std::map<int, int> last_update_;
};

inline double forget_update(double r_prev, double r_hat, const TadConfig& cfg) {
  const double r = cfg.rule == ForgetRule::verbatim ? cfg.gamma * (r_prev + 1.0) - 1.0 + r_hat
                                                    : cfg.gamma * (r_prev - 1.0) + 1.0 + r_hat;
  return clamp01(r);
}

struct TadOutcome {
  std::vector<bool> flags;    // anomalous per beacon
  std::vector<double> xi;     // CDF value per beacon
  std::vector<double> sigma;  // clamped sigma_f per beacon
};

// One detection round for all beacons of a timestep.
inline TadOutcome tad_update(ReputationLedger& ledger, const Vec3& p_hat, std::span<const Beacon> beacons,
                             const ErrorModel& model, const TadConfig& cfg, int t = -1) {
  TadOutcome out;
  out.flags.reserve(beacons.size());
  for (const auto& b : beacons) {
    const double mu = model.mu_f(b.measured_distance);
    const double sigma = std::max(model.sigma_f(b.measured_distance, b.reported_sigma_p), cfg.sigma_p_min);
    const double d_hat = (p_hat - b.reported_position).norm();
    const double e_hat = std::abs(d_hat - b.measured_distance + mu);
    const double xi = folded_abs_error_cdf(e_hat, mu, sigma);
    const bool anomalous = cfg.penalize_above ? xi > cfg.eps_t : !(xi > cfg.eps_t);
    const double r_prev = ledger.get(b.anchor_id);
    ledger.set(b.anchor_id, forget_update(r_prev, anomalous ? cfg.lambda_p : cfg.lambda_r, cfg), t);
    out.flags.push_back(anomalous);
    out.xi.push_back(xi);
    out.sigma.push_back(sigma);
  }
  return out;
}

struct CloudReputationShare {
  int uploader_id = -1;
  std::map<int, double> scores;
  bool clamped = false;  // some uploaded value was outside [0,1]

  static CloudReputationShare from(int uploader, const std::map<int, double>& raw) {
    CloudReputationShare s;
    s.uploader_id = uploader;
    for (const auto& [id, r] : raw) {
      if (!(r >= 0.0 && r <= 1.0)) s.clamped = true;
      s.scores[id] = std::isfinite(r) ? clamp01(r) : 0.0;
    }
    return s;
  }
};

using PropagationMap = std::function<double(double)>;

inline double square_map(double x) { return x * x; }

struct PropagationResult {
  std::map<int, double> effective;
  bool fallback = false;  // no share with positive trust for some anchor
};

// r~_{k,n} = sum_m r_{k,m} r_{m,n} / sum_m r_{k,m} over uploaders m not in {k, n}
// that report on n; then r~~ = (F_p(r~) + r_{k,n}) / 2. Anchors without a
// usable share keep their local score.
inline PropagationResult propagate_reputation(const ReputationLedger& local,
                                              std::span<const CloudReputationShare> shares,
                                              std::span<const int> anchors,
                                              const PropagationMap& f_p = square_map) {
  PropagationResult out;
  for (int n : anchors) {
    const double r_local = local.get(n);
    double num = 0.0, den = 0.0;
    for (const auto& s : shares) {
      if (s.uploader_id == local.owner() || s.uploader_id == n) continue;
      auto it = s.scores.find(n);
      if (it == s.scores.end()) continue;
      const double trust = local.get(s.uploader_id);
      num += trust * it->second;
      den += trust;
    }
    if (den <= 0.0) {
      if (!shares.empty()) out.fallback = true;
      out.effective[n] = r_local;
      continue;
    }
    const double prop = num / den;
    out.effective[n] = clamp01((f_p(prop) + r_local) / 2.0);
  }
  return out;
}

}  // namespace uavloc
