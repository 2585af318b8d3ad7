#pragma once

// Measurement-noise models: RSSI ranging through a log-distance path-loss law,
// Gaussian self-localization error, and their fusion into one modeled error
// scale sigma_M per coverage radius.

#include "uavloc/core.hpp"

#include <algorithm>
#include <iomanip>
#include <functional>
#include <utility>
#include <vector>

namespace uavloc {

struct PathLossParams {
  double n_p = 3.0;           // path-loss exponent
  double d0 = 1.0;            // reference distance, m
  double pr_d0 = -30.0;       // RSSI at d0, dBm
  double sigma_r_min = 0.5;   // RSSI noise std bounds, dB
  double sigma_r_max = 2.0;

  void validate() const {
    if (!(n_p > 0.0)) throw DomainError("path-loss exponent must be positive");
    if (!(d0 > 0.0)) throw DomainError("reference distance must be positive");
    if (!(sigma_r_min >= 0.0 && sigma_r_min <= sigma_r_max))
      throw DomainError("RSSI noise range must satisfy 0 <= min <= max");
  }
};

// Per-UAV self-localization error. With `power` set the bounds are on
// sigma_p^2 (m^2) and the draw is uniform in power; otherwise uniform in sigma_p.
struct PositionErrorProfile {
  double sigma_p_min = 0.1;
  double sigma_p_max = 3.0;
  bool power = false;

  void validate() const {
    if (!(sigma_p_min >= 0.0 && sigma_p_min <= sigma_p_max))
      throw DomainError("position error range must satisfy 0 <= min <= max");
  }
  double draw(Rng& rng) const {
    const double v = rng.uniform(sigma_p_min, sigma_p_max);
    return power ? std::sqrt(v) : v;
  }
  // smallest sigma_p the profile can produce
  double min_sigma() const { return power ? std::sqrt(sigma_p_min) : sigma_p_min; }
};

// Piecewise-linear table of the modeled error keyed by a radius (coverage
// radius for the sigma_M table, exact distance for the per-anchor variant).
class ModeledErrorTable {
 public:
  struct Entry {
    double radius;   // m
    double sigma_m;  // m
    double mu_f;     // m
  };

  ModeledErrorTable() = default;
  explicit ModeledErrorTable(std::vector<Entry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 1; i < entries_.size(); ++i)
      if (!(entries_[i].radius > entries_[i - 1].radius))
        throw UsageError("error table radii must be strictly increasing");
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  double sigma_m(double radius) const { return interpolate(radius, &Entry::sigma_m); }
  double mu_f(double radius) const { return interpolate(radius, &Entry::mu_f); }

 private:
  double interpolate(double r, double Entry::*field) const {
    if (entries_.empty()) throw UsageError("lookup in an empty error table");
    if (r <= entries_.front().radius) return entries_.front().*field;
    if (r >= entries_.back().radius) return entries_.back().*field;
    auto hi = std::upper_bound(entries_.begin(), entries_.end(), r,
                               [](double v, const Entry& e) { return v < e.radius; });
    auto lo = hi - 1;
    if (r == lo->radius) return (*lo).*field;
    const double w = (r - lo->radius) / (hi->radius - lo->radius);
    return (1.0 - w) * ((*lo).*field) + w * ((*hi).*field);
  }

  std::vector<Entry> entries_;
};

inline double rssi_at_distance(double d, const PathLossParams& p, double noise_std, Rng& rng) {
  if (!(d > 0.0)) throw DomainError(concat("distance must be positive, got ", d));
  return p.pr_d0 - 10.0 * p.n_p * std::log10(d / p.d0) + rng.normal(0.0, noise_std);
}

inline double distance_from_rssi(double rssi, const PathLossParams& p) {
  return p.d0 * std::pow(10.0, (p.pr_d0 - rssi) / (10.0 * p.n_p));
}

namespace detail {

// Composite Simpson on a smooth integrand; used for small closed-form means.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 256) {
  if (b <= a) return 0.0;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double adaptive_simpson_step(const std::function<double(double)>& f, double a, double b,
                                    double fa, double fm, double fb, double whole, double tol,
                                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-8, int max_depth = 48) {
  if (b <= a) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Multiplicative correction that makes the inverted range unbiased. Inverting
// the log-distance law turns zero-mean dB noise into a log-normal factor whose
// mean exceeds one; dividing by that mean (averaged over the uniform noise std)
// restores E[d_measured] = d_true.
inline double range_bias_correction_uncached(const PathLossParams& p) {
  const double c = std::log(10.0) / (10.0 * p.n_p);
  auto growth = [c](double s) { return std::exp(0.5 * c * c * s * s); };
  double mean_growth;
  if (p.sigma_r_max - p.sigma_r_min < 1e-12)
    mean_growth = growth(p.sigma_r_min);
  else
    mean_growth = detail::simpson(growth, p.sigma_r_min, p.sigma_r_max) /
                  (p.sigma_r_max - p.sigma_r_min);
  return 1.0 / mean_growth;
}

inline double range_bias_correction(const PathLossParams& p) {
  struct Cache {
    double n_p = -1.0, lo = -1.0, hi = -1.0, value = 1.0;
  };
  thread_local Cache cache;
  if (cache.n_p != p.n_p || cache.lo != p.sigma_r_min || cache.hi != p.sigma_r_max) {
    cache = {p.n_p, p.sigma_r_min, p.sigma_r_max, range_bias_correction_uncached(p)};
  }
  return cache.value;
}

// One RSSI-based range measurement: draws the fading level, perturbs the RSSI,
// inverts the path-loss law and floors the result at 1 cm.
inline double measure_distance(double d_true, const PathLossParams& p, Rng& rng) {
  if (!(d_true > 0.0)) throw DomainError(concat("distance must be positive, got ", d_true));
  const double sigma_r = rng.uniform(p.sigma_r_min, p.sigma_r_max);
  if (sigma_r <= 0.0) return d_true;
  const double rssi = rssi_at_distance(d_true, p, sigma_r, rng);
  return std::max(kDistanceFloor, distance_from_rssi(rssi, p) * range_bias_correction(p));
}

// Reported self-position: isotropic Gaussian error with total power sigma_p^2.
inline Vec3 sample_position(const Vec3& p_true, double sigma_p, Rng& rng) {
  if (sigma_p < 0.0) throw DomainError(concat("sigma_p must be non-negative, got ", sigma_p));
  if (sigma_p == 0.0) return p_true;
  return p_true + rng.normal3(sigma_p / std::sqrt(3.0));
}

// Density of a zero-mean (shifted by mu) Gaussian whose standard deviation is
// itself uniform on [sigma_min, sigma_max]. Integrated over t = 1/sigma.
inline double mixture_pdf(double x, double mu, std::pair<double, double> sigma_range) {
  const auto [a, b] = sigma_range;
  if (!(a > 0.0 && b >= a)) throw DomainError("mixture sigma range must satisfy 0 < min <= max");
  if (b - a <= 1e-8 * b) return normal_pdf(x, mu, 0.5 * (a + b));
  const double u2 = (x - mu) * (x - mu);
  auto integrand = [u2](double t) {
    return std::exp(-0.5 * u2 * t * t) / (t * std::sqrt(2.0 * kPi));
  };
  return adaptive_simpson(integrand, 1.0 / b, 1.0 / a, 1e-8) / (b - a);
}

// Error of one beacon as seen along the line of sight: ranging error plus the
// anchor's position error projected at a uniformly random relative angle.
inline double sample_modeled_error(double d, const PathLossParams& p,
                                   const PositionErrorProfile& profile, Rng& rng) {
  const double eps_d = measure_distance(d, p, rng) - d;
  const double sigma_p = profile.draw(rng);
  const double eps_p = sample_position(Vec3::Zero(), sigma_p, rng).norm();
  const double cos_angle = rng.uniform(-1.0, 1.0);
  return eps_d + eps_p * cos_angle;
}

namespace detail {

inline ModeledErrorTable::Entry summarize(double radius, const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size() - 1);
  return {radius, std::sqrt(var), mean};
}

}  // namespace detail

// sigma_M and mu_f per coverage radius: anchors uniform in distance on
// (0, coverage], modeled error drawn per anchor.
inline ModeledErrorTable build_modeled_error_table(const PathLossParams& p,
                                                   const PositionErrorProfile& profile,
                                                   const std::vector<double>& coverages,
                                                   std::size_t samples_per_point, Rng& rng) {
  if (coverages.empty()) throw UsageError("coverage list must not be empty");
  if (samples_per_point < 10000) throw UsageError("at least 10^4 samples per coverage required");
  p.validate();
  profile.validate();
  std::vector<ModeledErrorTable::Entry> entries;
  std::vector<double> xs(samples_per_point);
  for (double c : coverages) {
    if (!(c > 0.0)) throw DomainError("coverage radius must be positive");
    for (auto& x : xs) {
      double d = rng.uniform(0.0, c);
      if (d <= 0.0) d = kDistanceFloor;
      x = sample_modeled_error(d, p, profile, rng);
    }
    entries.push_back(detail::summarize(c, xs));
  }
  return ModeledErrorTable(std::move(entries));
}

// Ranging-only error statistics at exact distances: sigma_d(d) and its mean.
inline ModeledErrorTable build_distance_error_table(const PathLossParams& p,
                                                    const std::vector<double>& distances,
                                                    std::size_t samples_per_point, Rng& rng) {
  if (distances.empty()) throw UsageError("distance list must not be empty");
  p.validate();
  std::vector<ModeledErrorTable::Entry> entries;
  std::vector<double> xs(samples_per_point);
  for (double d : distances) {
    for (auto& x : xs) x = measure_distance(d, p, rng) - d;
    entries.push_back(detail::summarize(d, xs));
  }
  return ModeledErrorTable(std::move(entries));
}

inline std::vector<double> linear_grid(double lo, double hi, double step) {
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  // snap to 12 significant digits so 0.1 steps print as typed
  for (long i = 0; i <= n; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    g.push_back(std::stod(concat(std::setprecision(12), v)));
  }
  return g;
}

// Everything the estimators and the detector need to know about the noise:
// sigma_f for a beacon combines the distance-indexed ranging error with the
// anchor's reported position error.
struct ErrorModel {
  PathLossParams path;
  PositionErrorProfile profile;
  ModeledErrorTable coverage_table;
  ModeledErrorTable distance_table;

  static ErrorModel build(const PathLossParams& path, const PositionErrorProfile& profile,
                          double max_distance, std::uint64_t seed,
                          std::size_t samples_per_point = 20000) {
    Rng rng(seed);
    ErrorModel m{path, profile, {}, {}};
    Rng a = rng.split(1), b = rng.split(2);
    m.coverage_table = build_modeled_error_table(path, profile, linear_grid(5.0, max_distance, 5.0),
                                                 samples_per_point, a);
    std::vector<double> ds = linear_grid(1.0, max_distance, 1.0);
    m.distance_table = build_distance_error_table(path, ds, samples_per_point, b);
    return m;
  }

  double sigma_f(double measured_distance, double reported_sigma_p) const {
    const double sd = distance_table.sigma_m(measured_distance);
    return std::sqrt(sd * sd + reported_sigma_p * reported_sigma_p);
  }
  double mu_f(double measured_distance) const { return distance_table.mu_f(measured_distance); }
};

}  // namespace uavloc
