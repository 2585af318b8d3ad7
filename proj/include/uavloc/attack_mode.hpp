#pragma once

#include "uavloc/core.hpp"

#include <string>
#include <variant>

namespace uavloc {

// Jam the beacon: noisy position, inflated range, inflated reported error.
struct Jamming {
  double sigma_j_sq = 0.0;  // jamming power
};

// Report the own position shifted by a constant vector.
struct Bias {
  Vec3 b = Vec3::Zero();  // m
};

// Report a position with extra error while claiming a tiny position error.
struct Manipulation {
  double sigma_m_sq = 0.0;  // manipulation index
};

using AttackMode = std::variant<Jamming, Bias, Manipulation>;

inline std::string mode_name(const AttackMode& m) {
  struct V {
    std::string operator()(const Jamming&) const { return "jamming"; }
    std::string operator()(const Bias&) const { return "bias"; }
    std::string operator()(const Manipulation&) const { return "manipulation"; }
  };
  return std::visit(V{}, m);
}

// Scalar attack parameter A_t of a mode. Bias vectors are parameterized by the
// per-axis component, so (6,6,6) has A_t = 6.
inline double attack_parameter(const AttackMode& m) {
  struct V {
    double operator()(const Jamming& j) const { return j.sigma_j_sq; }
    double operator()(const Bias& b) const { return b.b.x(); }
    double operator()(const Manipulation& mm) const { return mm.sigma_m_sq; }
  };
  return std::visit(V{}, m);
}

// Same mode kind as `like`, with its magnitude replaced by `a_t`.
inline AttackMode with_parameter(const AttackMode& like, double a_t) {
  struct V {
    double a;
    AttackMode operator()(const Jamming&) const { return Jamming{a}; }
    AttackMode operator()(const Bias&) const { return Bias{Vec3(a, a, a)}; }
    AttackMode operator()(const Manipulation&) const { return Manipulation{a}; }
  };
  return std::visit(V{a_t}, like);
}

inline AttackMode make_mode(const std::string& name, double a_t) {
  if (name == "jamming") return Jamming{a_t};
  if (name == "bias") return Bias{Vec3(a_t, a_t, a_t)};
  if (name == "manipulation") return Manipulation{a_t};
  throw UsageError(concat("unknown attack mode '", name, "'"));
}

}  // namespace uavloc
