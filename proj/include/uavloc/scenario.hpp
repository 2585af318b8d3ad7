#pragma once

// World state, waypoint mobility, neighbor discovery and the per-trial
// pipeline: move, schedule attacks, collect (possibly falsified) beacons,
// run detection and estimation, record the error.

#include "uavloc/defense.hpp"
#include "uavloc/errormodel.hpp"
#include "uavloc/estimators.hpp"
#include "uavloc/threat.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <thread>
#include <vector>

namespace uavloc {

// Where UAVs are placed and where they fly to.
//   ball: uniform in a ball of `sphere_radius` around the map center
//   box: uniform in the map
//   gaussian: horizontal normal around the map center (sd `placement_sigma`),
//             clipped to the map; altitude uniform
enum class Placement { ball, box, gaussian };

struct WorldConfig {
  Vec3 map_size{300.0, 300.0, 10.0};
  int n_anchors = 100;
  int n_malicious = 0;
  double speed_min = 0.3, speed_max = 1.7;                // anchors, m/s
  double target_speed_min = 0.3, target_speed_max = 1.7;  // target, m/s
  double sim_duration = 15.0;                             // s
  double dt = 1.0;                                        // s
  double coverage_radius = 50.0;                          // m
  Placement placement = Placement::box;
  double sphere_radius = 25.0;    // ball placement, m
  double placement_sigma = 90.0;  // gaussian placement, m
  double target_sigma = -1.0;     // gaussian placement of the target, < 0 = same as anchors
  // Anchors flying escort around the target: every malicious UAV when
  // `malicious_follow` is set, plus the first `n_escorts` honest anchors.
  bool malicious_follow = false;
  int n_escorts = 0;
  double follow_radius = 20.0;  // m
  std::uint64_t seed = 0;

  int steps() const { return std::max(1, static_cast<int>(std::llround(sim_duration / dt))); }

  void validate() const {
    if (n_anchors < 0 || n_malicious < 0) throw UsageError("UAV counts must be non-negative");
    if (n_malicious > n_anchors)
      throw UsageError(concat("more malicious UAVs (", n_malicious, ") than anchors (", n_anchors, ")"));
    if (!(coverage_radius >= 0.0)) throw DomainError("coverage radius must be non-negative");
    if (!(dt > 0.0) || !(sim_duration > 0.0)) throw DomainError("dt and duration must be positive");
    if (!(speed_min >= 0.0 && speed_min <= speed_max)) throw DomainError("invalid anchor speed range");
    if (!(target_speed_min >= 0.0 && target_speed_min <= target_speed_max))
      throw DomainError("invalid target speed range");
    if (!(map_size.minCoeff() > 0.0)) throw DomainError("map size must be positive");
    if (n_escorts < 0 || n_escorts > n_anchors - n_malicious) throw UsageError("too many escorts");
  }
};

struct UavState {
  int id = 0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 waypoint = Vec3::Zero();
  Vec3 follow_offset = Vec3::Zero();
  double speed = 0.0;
  double sigma_p = 0.0;
  bool is_malicious = false;
  int follows = -1;  // id of the escorted UAV, -1 for free flight
};

// uavs[0] is the target (id 0); anchors carry ids 1..n.
struct World {
  WorldConfig cfg;
  std::vector<UavState> uavs;
  int t = 0;

  const UavState& uav(int id) const { return uavs.at(static_cast<std::size_t>(id)); }
  UavState& uav(int id) { return uavs.at(static_cast<std::size_t>(id)); }

  std::vector<int> ids() const {
    std::vector<int> v;
    for (const auto& u : uavs) v.push_back(u.id);
    return v;
  }

  std::vector<int> neighbors(int id) const {
    std::vector<int> out;
    const Vec3& p = uav(id).position;
    for (const auto& u : uavs) {
      if (u.id == id) continue;
      const double d = (u.position - p).norm();
      if (d > 0.0 && d <= cfg.coverage_radius) out.push_back(u.id);
    }
    return out;
  }

  std::set<int> malicious_ids() const {
    std::set<int> s;
    for (const auto& u : uavs)
      if (u.is_malicious) s.insert(u.id);
    return s;
  }
};

namespace detail {

inline Vec3 clamp_to_map(const Vec3& p, const Vec3& map) {
  return p.cwiseMax(Vec3::Zero()).cwiseMin(map);
}

inline Vec3 draw_point(const WorldConfig& c, Rng& rng, bool target = false) {
  const Vec3 center = 0.5 * c.map_size;
  const double sd = target && c.target_sigma >= 0.0 ? c.target_sigma : c.placement_sigma;
  switch (c.placement) {
    case Placement::ball: {
      const double r = c.sphere_radius * std::cbrt(rng.uniform());
      return center + r * rng.direction();
    }
    case Placement::gaussian: {
      Vec3 p(rng.normal(center.x(), sd), rng.normal(center.y(), sd),
             rng.uniform(0.0, c.map_size.z()));
      return clamp_to_map(p, c.map_size);
    }
    case Placement::box:
    default:
      return {rng.uniform(0.0, c.map_size.x()), rng.uniform(0.0, c.map_size.y()),
              rng.uniform(0.0, c.map_size.z())};
  }
}

inline Vec3 draw_offset(double radius, Rng& rng) { return radius * std::cbrt(rng.uniform()) * rng.direction(); }

inline void renew(World& w, UavState& u, Rng& rng) {
  const bool target = u.id == 0;
  u.speed = target ? rng.uniform(w.cfg.target_speed_min, w.cfg.target_speed_max)
                   : rng.uniform(w.cfg.speed_min, w.cfg.speed_max);
  if (u.follows >= 0) {
    u.follow_offset = draw_offset(w.cfg.follow_radius, rng);
    u.waypoint = w.cfg.placement == Placement::ball
                     ? Vec3(w.uav(u.follows).position + u.follow_offset)
                     : clamp_to_map(w.uav(u.follows).position + u.follow_offset, w.cfg.map_size);
  } else {
    u.waypoint = draw_point(w.cfg, rng, target);
  }
}

}  // namespace detail

inline World init_world(const WorldConfig& cfg, Rng& rng) {
  cfg.validate();
  World w;
  w.cfg = cfg;
  const int n = cfg.n_anchors;
  w.uavs.resize(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) w.uavs[static_cast<std::size_t>(i)].id = i;

  // malicious ids drawn without replacement among the anchors
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  std::shuffle(pool.begin(), pool.end(), rng.engine());
  for (int i = 0; i < cfg.n_malicious; ++i) w.uav(pool[static_cast<std::size_t>(i)]).is_malicious = true;
  int escorts = cfg.n_escorts;
  for (int i = cfg.n_malicious; i < n && escorts > 0; ++i, --escorts)
    w.uav(pool[static_cast<std::size_t>(i)]).follows = 0;
  if (cfg.malicious_follow)
    for (auto& u : w.uavs)
      if (u.is_malicious) u.follows = 0;

  UavState& target = w.uav(0);
  target.position = detail::draw_point(cfg, rng, true);
  detail::renew(w, target, rng);
  for (auto& u : w.uavs) {
    if (u.id == 0) continue;
    u.position = u.follows >= 0 ? Vec3(target.position + detail::draw_offset(cfg.follow_radius, rng))
                                : detail::draw_point(cfg, rng);
    if (cfg.placement != Placement::ball) u.position = detail::clamp_to_map(u.position, cfg.map_size);
    detail::renew(w, u, rng);
  }
  return w;
}

// Per-UAV self-localization quality, fixed for a trial.
inline void assign_sigma_p(World& w, const PositionErrorProfile& profile, Rng& rng) {
  for (auto& u : w.uavs) u.sigma_p = profile.draw(rng);
}

inline void step_world(World& w, double dt, Rng& rng) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  for (auto& u : w.uavs) {
    if (u.follows >= 0) {
      const Vec3 goal = w.uav(u.follows).position + u.follow_offset;
      u.waypoint = w.cfg.placement == Placement::ball ? goal : detail::clamp_to_map(goal, w.cfg.map_size);
    }
    const Vec3 to = u.waypoint - u.position;
    const double dist = to.norm();
    const double reach = u.speed * dt;
    if (dist <= reach || dist <= 1.0) {
      const Vec3 before = u.position;
      if (dist <= reach) u.position = u.waypoint;
      u.velocity = (u.position - before) / dt;
      detail::renew(w, u, rng);
    } else {
      u.velocity = to / dist * u.speed;
      u.position += to * (reach / dist);
    }
    if (w.cfg.placement != Placement::ball) u.position = detail::clamp_to_map(u.position, w.cfg.map_size);
  }
  ++w.t;
}

// Beacons plus the ground truth that stays with the simulator.
struct BeaconSet {
  std::vector<Beacon> beacons;
  std::vector<bool> falsified;
};

inline BeaconSet in_range_beacons(const World& w, int target_id, const ErrorModel& model, Rng& rng) {
  BeaconSet out;
  const Vec3& p = w.uav(target_id).position;
  for (const auto& u : w.uavs) {
    if (u.id == target_id) continue;
    const double d = (u.position - p).norm();
    if (!(d > 0.0) || d > w.cfg.coverage_radius) continue;
    Beacon b;
    b.anchor_id = u.id;
    b.reported_sigma_p = std::max(u.sigma_p, 1e-6);
    b.reported_position = sample_position(u.position, u.sigma_p, rng);
    b.measured_distance = measure_distance(d, model.path, rng);
    out.beacons.push_back(b);
    out.falsified.push_back(false);
  }
  return out;
}

// ----- trial pipeline --------------------------------------------------------

struct AttackSpec {
  bool enabled = false;
  AttackMode mode = Bias{Vec3(6.0, 6.0, 6.0)};
  AttackStrategy strategy;
  // >= 0: ignore the malicious set and falsify this share of every
  // observer's beacons per round. Random draws each beacon independently;
  // coordinated concentrates the same share into shared attack frames.
  double round_fraction = -1.0;
};

struct DefenseSpec {
  bool tad = false;
  TadConfig tad_cfg;
  bool rp = false;
  int n_uploaders = 10;       // observers sharing reputations, honest escorts first
  int n_false_uploaders = 0;  // malicious uploaders sending inverted scores
  bool record_trace = false;  // keep every observer's per-beacon reputations
};

struct TrialConfig {
  WorldConfig world;
  MagdConfig magd;
  bool weighted = true;  // w_f from the error model, otherwise unit weights
  AttackSpec attack;
  DefenseSpec defense;
};

struct ReputationTraceRow {
  int t = 0;
  int observer = 0;
  int anchor = 0;
  double r_local = 1.0;
  double r_effective = 1.0;
  int flag = -1;  // TAD verdict, -1 before the first estimate
};

struct TrialResult {
  std::vector<double> errors;  // per timestep with an estimate
  std::vector<Vec3> estimates;
  std::vector<Vec3> truths;
  std::vector<int> n_beacons;
  std::vector<int> n_falsified;
  int skipped = 0;  // timesteps without any estimate yet
  std::vector<ReputationTraceRow> trace;
  long tp = 0, fn = 0, fp = 0, tn = 0;
  double mean_error = 0.0;
  double max_error = 0.0;
  double p_d = 0.0;
  double p_f = 0.0;
  double p_a = 0.0;  // observed share of falsified beacons

  void finalize() {
    double s = 0.0;
    max_error = 0.0;
    for (double e : errors) {
      s += e;
      max_error = std::max(max_error, e);
    }
    mean_error = errors.empty() ? 0.0 : s / static_cast<double>(errors.size());
    p_d = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    p_f = fp + tn > 0 ? static_cast<double>(fp) / static_cast<double>(fp + tn) : 0.0;
    long nb = 0, nf = 0;
    for (std::size_t i = 0; i < n_beacons.size(); ++i) {
      nb += n_beacons[i];
      nf += n_falsified[i];
    }
    p_a = nb > 0 ? static_cast<double>(nf) / static_cast<double>(nb) : 0.0;
  }
};

namespace detail {

struct Observer {
  int id = 0;
  MagdState magd;
  ReputationLedger ledger;
  bool false_uploader = false;
};

inline std::vector<double> beacon_weights(std::span<const Beacon> bs, const ErrorModel& model, double sigma_min) {
  std::vector<double> s;
  s.reserve(bs.size());
  for (const auto& b : bs) s.push_back(std::max(model.sigma_f(b.measured_distance, b.reported_sigma_p), sigma_min));
  return weights_from_sigma(s);
}

}  // namespace detail

inline TrialResult run_trial(const TrialConfig& cfg, const ErrorModel& model, Rng& rng) {
  cfg.world.validate();
  if (cfg.attack.enabled) uavloc::validate(cfg.attack.mode);
  if (cfg.defense.tad) cfg.defense.tad_cfg.validate();

  Rng world_rng = rng.split(1), sense_rng = rng.split(2), attack_rng = rng.split(3), corrupt_rng = rng.split(4);
  World world = init_world(cfg.world, world_rng);
  assign_sigma_p(world, model.profile, world_rng);

  AttackPlan plan;
  plan.malicious_ids = world.malicious_ids();
  plan.mode = cfg.attack.mode;
  plan.strategy = cfg.attack.strategy;
  plan.seed = rng.split(5).seed();

  // Observers: the target first, then the reputation uploaders.
  std::vector<detail::Observer> obs;
  obs.push_back({0, {}, ReputationLedger(0), false});
  if (cfg.defense.rp) {
    std::vector<int> honest_escorts, bad;
    for (const auto& u : world.uavs) {
      if (u.id == 0) continue;
      if (u.is_malicious)
        bad.push_back(u.id);
      else if (u.follows == 0)
        honest_escorts.push_back(u.id);
    }
    // honest escorts first, malicious UAVs fill the remaining seats; the
    // first n_false_uploaders of those upload inverted scores
    const int n_bad = std::min<int>(std::max(0, cfg.defense.n_uploaders - static_cast<int>(honest_escorts.size())),
                                    static_cast<int>(bad.size()));
    const int n_honest = std::min<int>(cfg.defense.n_uploaders - n_bad, static_cast<int>(honest_escorts.size()));
    for (int i = 0; i < n_honest; ++i) {
      const int id = honest_escorts[static_cast<std::size_t>(i)];
      obs.push_back({id, {}, ReputationLedger(id), false});
    }
    for (int i = 0; i < n_bad; ++i) {
      const int id = bad[static_cast<std::size_t>(i)];
      obs.push_back({id, {}, ReputationLedger(id), i < cfg.defense.n_false_uploaders});
    }
  }
  std::vector<CloudReputationShare> cloud;

  TrialResult res;
  const int steps = cfg.world.steps();
  const auto ids = world.ids();
  const double sigma_min = cfg.defense.tad_cfg.sigma_p_min;

  for (int t = 0; t < steps; ++t) {
    if (t > 0) step_world(world, cfg.world.dt, world_rng);

    std::set<int> active;
    const bool by_fraction = cfg.attack.enabled && cfg.attack.round_fraction >= 0.0;
    double fraction_now = 0.0;
    if (by_fraction) {
      const double f = std::min(1.0, cfg.attack.round_fraction);
      if (std::holds_alternative<GlobalCoordinated>(plan.strategy.kind)) {
        AttackPlan frames = plan;
        frames.strategy.attack_rate = std::max(plan.strategy.attack_rate, f);
        if (frames.strategy.attack_rate > 0.0 && coordinated_frame_active(frames, t))
          fraction_now = f / frames.strategy.attack_rate;
      } else {
        fraction_now = f;
      }
    } else if (cfg.attack.enabled) {
      auto pairs = schedule_attacks(plan, t, ids, [&](int id) { return world.neighbors(id); }, attack_rng);
      for (const auto& p : pairs) active.insert(p.attacker);
    }

    std::vector<CloudReputationShare> next_cloud;
    for (auto& o : obs) {
      BeaconSet bs = in_range_beacons(world, o.id, model, sense_rng);
      for (std::size_t i = 0; i < bs.beacons.size(); ++i) {
        if (by_fraction) {
          if (!(fraction_now > 0.0) || !attack_rng.bernoulli(fraction_now)) continue;
        } else if (!active.count(bs.beacons[i].anchor_id)) {
          // a falsified broadcast reaches every receiver in range
          continue;
        }
        bs.beacons[i] = corrupt_beacon(bs.beacons[i], plan.mode, corrupt_rng);
        bs.falsified[i] = true;
      }
      const bool is_target = o.id == 0;

      std::vector<double> reps(bs.beacons.size(), 1.0);
      std::vector<int> verdict(bs.beacons.size(), -1);
      if (cfg.defense.tad && !bs.beacons.empty()) {
        if (o.magd.has_estimate) {
          const TadOutcome det = tad_update(o.ledger, o.magd.p_hat, bs.beacons, model, cfg.defense.tad_cfg, t);
          for (std::size_t i = 0; i < det.flags.size(); ++i) verdict[i] = det.flags[i] ? 1 : 0;
          if (is_target)
            for (std::size_t i = 0; i < det.flags.size(); ++i) {
              if (bs.falsified[i])
                det.flags[i] ? ++res.tp : ++res.fn;
              else
                det.flags[i] ? ++res.fp : ++res.tn;
            }
        }
        std::vector<int> anchors;
        for (const auto& b : bs.beacons) anchors.push_back(b.anchor_id);
        if (is_target && cfg.defense.rp && !cloud.empty()) {
          const auto eff = propagate_reputation(o.ledger, cloud, anchors);
          for (std::size_t i = 0; i < anchors.size(); ++i) reps[i] = eff.effective.at(anchors[i]);
        } else {
          for (std::size_t i = 0; i < anchors.size(); ++i) reps[i] = o.ledger.get(anchors[i]);
        }
        if (cfg.defense.record_trace)
          for (std::size_t i = 0; i < anchors.size(); ++i)
            res.trace.push_back({t, o.id, anchors[i], o.ledger.get(anchors[i]), reps[i], verdict[i]});
      }

      std::vector<double> w, mu;
      if (!bs.beacons.empty()) {
        w = cfg.weighted ? detail::beacon_weights(bs.beacons, model, sigma_min)
                         : std::vector<double>(bs.beacons.size(), 1.0);
        for (const auto& b : bs.beacons) mu.push_back(model.mu_f(b.measured_distance));
      }
      // an observer that distrusts every anchor keeps its estimate
      const bool any_trust = std::any_of(reps.begin(), reps.end(), [](double r) { return r > 0.0; });
      if (any_trust || !o.magd.has_estimate) {
        if (!any_trust) std::fill(reps.begin(), reps.end(), 1.0);
        magd_step(o.magd, bs.beacons, reps, w, mu, cfg.magd, cfg.world.dt);
      }

      if (cfg.defense.rp && !is_target) {
        std::map<int, double> up;
        for (const auto& [id, r] : o.ledger.scores())
          up[id] = o.false_uploader ? (world.uav(id).is_malicious ? 1.0 : 0.0) : r;
        next_cloud.push_back(CloudReputationShare::from(o.id, up));
      }

      if (is_target) {
        int nf = 0;
        for (bool f : bs.falsified) nf += f ? 1 : 0;
        res.n_beacons.push_back(static_cast<int>(bs.beacons.size()));
        res.n_falsified.push_back(nf);
        if (o.magd.has_estimate) {
          const Vec3& truth = world.uav(0).position;
          res.errors.push_back((o.magd.p_hat - truth).norm());
          res.estimates.push_back(o.magd.p_hat);
          res.truths.push_back(truth);
        } else {
          ++res.skipped;
        }
      }
    }
    if (cfg.defense.rp) cloud = std::move(next_cloud);
  }
  res.finalize();
  return res;
}

// ----- Monte Carlo ------------------------------------------------------------

struct MonteCarloSummary {
  int trials = 0;
  double mean_error = 0.0;
  double std_error = 0.0;  // standard error of the mean over trials
  double p_d = 0.0;
  double p_f = 0.0;
  double p_a = 0.0;
  std::vector<double> series;  // per-timestep mean error
  std::vector<TrialResult> results;
};

// Runs `fn(trial_index, rng)` for every trial with streams derived from
// (seed, trial index); results come back in index order regardless of how
// many workers ran them.
template <typename Fn>
auto parallel_trials(int trials, std::uint64_t seed, int parallel, Fn&& fn) {
  using R = decltype(fn(0, std::declval<Rng&>()));
  std::vector<R> out(static_cast<std::size_t>(std::max(0, trials)));
  const Rng base(seed);
  auto work = [&](int lo, int stride) {
    for (int i = lo; i < trials; i += stride) {
      Rng r = base.split(static_cast<std::uint64_t>(i));
      out[static_cast<std::size_t>(i)] = fn(i, r);
    }
  };
  const int nthreads = std::max(1, std::min(parallel, trials));
  if (nthreads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(nthreads));
    for (int k = 0; k < nthreads; ++k)
      pool.emplace_back([&, k] {
        try {
          work(k, nthreads);
        } catch (...) {
          errs[static_cast<std::size_t>(k)] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }
  return out;
}

inline MonteCarloSummary summarize_trials(std::vector<TrialResult> results) {
  MonteCarloSummary s;
  s.trials = static_cast<int>(results.size());
  if (results.empty()) return s;
  double sum = 0.0, sq = 0.0;
  long tp = 0, fn = 0, fp = 0, tn = 0, nb = 0, nf = 0;
  std::size_t len = 0;
  for (const auto& r : results) len = std::max(len, r.errors.size());
  std::vector<double> acc(len, 0.0);
  std::vector<int> cnt(len, 0);
  for (const auto& r : results) {
    sum += r.mean_error;
    sq += r.mean_error * r.mean_error;
    tp += r.tp, fn += r.fn, fp += r.fp, tn += r.tn;
    for (std::size_t i = 0; i < r.n_beacons.size(); ++i) nb += r.n_beacons[i], nf += r.n_falsified[i];
    // align series at the end so that a late first estimate shifts the start
    const std::size_t off = len - r.errors.size();
    for (std::size_t i = 0; i < r.errors.size(); ++i) acc[off + i] += r.errors[i], ++cnt[off + i];
  }
  const double n = static_cast<double>(results.size());
  s.mean_error = sum / n;
  const double var = results.size() > 1 ? std::max(0.0, (sq - n * s.mean_error * s.mean_error) / (n - 1.0)) : 0.0;
  s.std_error = std::sqrt(var / n);
  s.p_d = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  s.p_f = fp + tn > 0 ? static_cast<double>(fp) / static_cast<double>(fp + tn) : 0.0;
  s.p_a = nb > 0 ? static_cast<double>(nf) / static_cast<double>(nb) : 0.0;
  s.series.resize(len);
  for (std::size_t i = 0; i < len; ++i) s.series[i] = cnt[i] ? acc[i] / cnt[i] : 0.0;
  s.results = std::move(results);
  return s;
}

inline MonteCarloSummary run_monte_carlo(const TrialConfig& cfg, const ErrorModel& model, int trials,
                                         std::uint64_t seed, int parallel = 1) {
  if (trials < 1) throw UsageError("trials must be at least 1");
  auto results = parallel_trials(trials, seed, parallel, [&](int, Rng& r) { return run_trial(cfg, model, r); });
  return summarize_trials(std::move(results));
}

}  // namespace uavloc
