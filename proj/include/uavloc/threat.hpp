#pragma once

// Falsified beacons: the three corruption modes and the orchestration of
// attacks over time.

#include "uavloc/attack_mode.hpp"
#include "uavloc/errormodel.hpp"
#include "uavloc/estimators.hpp"

#include <algorithm>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace uavloc {

inline void validate(const AttackMode& mode) {
  if (const auto* b = std::get_if<Bias>(&mode)) {
    if (!b->b.allFinite()) throw DomainError("bias vector must be finite");
    return;
  }
  if (!(attack_parameter(mode) >= 0.0)) throw DomainError("attack parameter must be non-negative");
}

// Value semantics: the input beacon is never touched.
inline Beacon corrupt_beacon(const Beacon& in, const AttackMode& mode, Rng& rng) {
  Beacon out = in;
  if (const auto* j = std::get_if<Jamming>(&mode)) {
    if (j->sigma_j_sq <= 0.0) return out;
    const double sj = std::sqrt(j->sigma_j_sq);
    out.reported_position += rng.normal3(std::sqrt(j->sigma_j_sq / 3.0));
    out.measured_distance = std::max(kDistanceFloor, in.measured_distance + rng.uniform(0.0, j->sigma_j_sq));
    out.reported_sigma_p = in.reported_sigma_p + sj;
  } else if (const auto* b = std::get_if<Bias>(&mode)) {
    out.reported_position += b->b;
  } else if (const auto* m = std::get_if<Manipulation>(&mode)) {
    if (m->sigma_m_sq <= 0.0) return out;
    // per-axis offset magnitude uniform on [0, sqrt(A/3)], random sign
    const double half = std::sqrt(m->sigma_m_sq / 3.0);
    for (int k = 0; k < 3; ++k) {
      const double mag = rng.uniform(0.0, half);
      out.reported_position[k] += rng.bernoulli(0.5) ? mag : -mag;
    }
    out.reported_sigma_p = 1.0 / std::sqrt(m->sigma_m_sq);
  }
  return out;
}

struct GlobalRandom {};
struct GlobalCoordinated {
  int frame_period = 1;  // timesteps per attack frame
};
struct Stalking {
  int victim_id = 0;
};
using StrategyKind = std::variant<GlobalRandom, GlobalCoordinated, Stalking>;

struct AttackStrategy {
  StrategyKind kind = GlobalRandom{};
  double attack_rate = 0.7;  // r_a
};

inline std::string strategy_name(const AttackStrategy& s) {
  if (std::holds_alternative<GlobalRandom>(s.kind)) return "random";
  if (std::holds_alternative<GlobalCoordinated>(s.kind)) return "coordinated";
  return "stalking";
}

struct AttackPlan {
  std::set<int> malicious_ids;
  AttackMode mode = Bias{};
  AttackStrategy strategy;
  double p_a = 0.0;          // expected share of falsified beacons, informational
  std::uint64_t seed = 0;    // drives the shared frame coin of coordinated attacks

  void validate() const {
    uavloc::validate(mode);
    if (!(strategy.attack_rate >= 0.0 && strategy.attack_rate <= 1.0))
      throw DomainError("attack rate must lie in [0, 1]");
    if (!(p_a >= 0.0 && p_a <= 1.0)) throw DomainError("p_a must lie in [0, 1]");
    if (const auto* c = std::get_if<GlobalCoordinated>(&strategy.kind); c && c->frame_period < 1)
      throw DomainError("frame period must be at least one timestep");
  }
};

// Shared coin of the coordinated strategy: every malicious UAV sees the same
// outcome for a frame, and frames are independent with probability r_a.
inline bool coordinated_frame_active(const AttackPlan& plan, int t) {
  const auto& c = std::get<GlobalCoordinated>(plan.strategy.kind);
  const auto frame = static_cast<std::uint64_t>(t / c.frame_period);
  Rng coin(mix_seed(plan.seed ^ 0xC0021D1A7EDULL, frame));
  return coin.bernoulli(plan.strategy.attack_rate);
}

struct AttackPair {
  int attacker = -1;
  int target = -1;
  bool operator==(const AttackPair&) const = default;
};

// `neighbors(id)` returns the ids within coverage of `id`. Attackers with no
// neighbor in range stay idle. A falsified broadcast reaches every receiver
// in range; the pair names the intended victim.
template <typename NeighborFn>
std::vector<AttackPair> schedule_attacks(const AttackPlan& plan, int t, std::span<const int> world_ids,
                                         NeighborFn&& neighbors, Rng& rng) {
  std::vector<AttackPair> out;
  const double ra = plan.strategy.attack_rate;
  if (ra <= 0.0) return out;
  auto present = [&](int id) { return std::find(world_ids.begin(), world_ids.end(), id) != world_ids.end(); };

  if (const auto* st = std::get_if<Stalking>(&plan.strategy.kind)) {
    if (!present(st->victim_id)) throw UsageError(concat("stalking victim ", st->victim_id, " is not in the world"));
    for (int a : plan.malicious_ids) {
      if (!present(a) || a == st->victim_id) continue;
      if (rng.bernoulli(ra)) out.push_back({a, st->victim_id});
    }
    return out;
  }

  const bool coordinated = std::holds_alternative<GlobalCoordinated>(plan.strategy.kind);
  const bool frame_on = coordinated && coordinated_frame_active(plan, t);
  for (int a : plan.malicious_ids) {
    if (!present(a)) continue;
    const bool active = coordinated ? frame_on : rng.bernoulli(ra);
    if (!active) continue;
    const std::vector<int> nb = neighbors(a);
    if (nb.empty()) continue;
    out.push_back({a, nb[rng.index(nb.size())]});
  }
  return out;
}

// Standard deviation of the line-of-sight error of a falsified beacon, for
// anchors spread uniformly in distance on (0, coverage]. Feeds CRLB-2.
inline double attacked_sigma_m(const AttackMode& mode, const PathLossParams& path,
                               const PositionErrorProfile& profile, double coverage,
                               std::size_t samples, Rng& rng) {
  if (samples < 2) throw UsageError("need at least two samples");
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    double d = rng.uniform(0.0, coverage);
    if (d <= 0.0) d = kDistanceFloor;
    const Vec3 anchor = d * rng.direction();
    const double sp = profile.draw(rng);
    Beacon b{sample_position(anchor, sp, rng), sp, measure_distance(d, path, rng), 0};
    b = corrupt_beacon(b, mode, rng);
    const double e = b.measured_distance - b.reported_position.norm();
    const double delta = e - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (e - mean);
  }
  return std::sqrt(m2 / static_cast<double>(samples - 1));
}

}  // namespace uavloc
