#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace uavloc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Error hierarchy. Every failure the library reports is one of these so the
// CLI can map them onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (negative sigma,
// non-positive distance, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Caller supplied an unusable combination of inputs (empty grids, missing
// victim, more malicious UAVs than UAVs).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Anchor geometry carries too little information: singular FIM, coplanar
// anchors, coincident anchor and target.
class DegenerateGeometry : public Error {
 public:
  DegenerateGeometry(const std::string& what, double det = 0.0,
                     double condition = std::numeric_limits<double>::infinity())
      : Error(what), det_(det), condition_(condition) {}

  double det() const { return det_; }
  double condition() const { return condition_; }

 private:
  double det_;
  double condition_;
};

// Configuration file problems (unknown key, malformed value).
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kPi = 3.14159265358979323846;

// Minimum measured distance after inverting the path-loss model.
inline constexpr double kDistanceFloor = 0.01;

template <typename... Args>
std::string concat(const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

// ---------------------------------------------------------------------------
// Random streams.
//
// A single 64-bit seed is split into independent streams by hashing it together
// with a list of stream tags (trial index, worker, purpose). Two streams with
// different tags never share state, which keeps Monte Carlo results identical
// regardless of how trials are scheduled onto threads.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t s = seed ^ (tag * 0xD6E8FEB86659FD93ULL + 0x2545F4914F6CDD1DULL);
  splitmix64(s);
  return splitmix64(s);
}

class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  // Derive an independent child stream. Does not advance this stream.
  Rng split(std::uint64_t tag) const { return Rng(mix_seed(seed_, tag)); }
  Rng split(std::uint64_t tag_a, std::uint64_t tag_b) const {
    return Rng(mix_seed(mix_seed(seed_, tag_a), tag_b));
  }

  std::uint64_t seed() const { return seed_; }

  double uniform(double lo = 0.0, double hi = 1.0) {
    if (hi <= lo) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal(double mean = 0.0, double stddev = 1.0) {
    if (stddev <= 0.0) return mean;
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }
  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }
  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  Vec3 normal3(double stddev_per_axis) {
    return {normal(0.0, stddev_per_axis), normal(0.0, stddev_per_axis),
            normal(0.0, stddev_per_axis)};
  }
  // Uniform direction on the unit sphere.
  Vec3 direction() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * kPi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  std::mt19937_64& engine() { return engine_; }

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
}

}  // namespace uavloc
