#pragma once

// Fisher information and Cramer-Rao bounds for range-based 3D localization.
//
// The FIM of N range measurements with common noise sigma_M is
//   I = (1/sigma_M^2) * sum_n u_n u_n^T,   u_n = (p_target - p_n) / d_n,
// and the position bound is tr(I^-1), evaluated through the 3x3 adjugate.
// The geometric route (projected triangle areas over tetrahedron volumes) is
// kept as an independent evaluation of the same quantity.

#include "uavloc/attack_mode.hpp"
#include "uavloc/core.hpp"

#include <span>
#include <vector>

namespace uavloc {

struct Fim3 {
  Mat3 m = Mat3::Zero();

  double trace() const { return m.trace(); }
};

inline Fim3 fim(const Vec3& target, std::span<const Vec3> anchors, double sigma_m) {
  if (!(sigma_m > 0.0)) throw DomainError(concat("sigma_M must be positive, got ", sigma_m));
  Fim3 out;
  for (const Vec3& a : anchors) {
    const Vec3 diff = target - a;
    const double d2 = diff.squaredNorm();
    if (!(d2 > 0.0)) throw DegenerateGeometry("anchor coincides with target");
    out.m.noalias() += diff * diff.transpose() / d2;
  }
  out.m /= sigma_m * sigma_m;
  return out;
}

inline Mat3 adjugate(const Mat3& a) {
  Mat3 adj;
  adj(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  adj(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  adj(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  adj(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  adj(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  adj(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  adj(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  adj(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  adj(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return adj;
}

inline double determinant(const Mat3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

inline double condition_number(const Mat3& a) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(a, Eigen::EigenvaluesOnly);
  const auto ev = es.eigenvalues();
  const double lo = ev.minCoeff(), hi = ev.maxCoeff();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

// tr(I^-1) = tr(adj I) / det I. Singular when |det| < 1e-12 (tr/3)^3 or the
// condition number reaches 1e12.
inline double crlb_trace(const Fim3& f) {
  const double det = determinant(f.m);
  const double scale = f.trace() / 3.0;
  const double cond = condition_number(f.m);
  if (!(std::abs(det) >= 1e-12 * scale * scale * scale) || !(cond < 1e12) || !(det > 0.0))
    throw DegenerateGeometry(
        concat("singular Fisher information (det=", det, ", cond=", cond, ")"), det, cond);
  return adjugate(f.m).trace() / det;
}

// Bound for anchors symmetric around the target, as a function of sigma_M and N.
inline double closed_form_crlb(double sigma_m, std::size_t n_anchors) {
  if (n_anchors < 1) throw DomainError("closed-form CRLB needs at least one anchor");
  return 6.0 * sigma_m * sigma_m / static_cast<double>(n_anchors);
}

// Hadamard scale matrix correcting the FIM for an altitude range r_z that is
// narrower than the horizontal ranges, with d_max^2 = 2 R_x^2 + r_z^2.
struct ScaleSpec {
  double d_max = 0.0;
  double r_z = 0.0;
  double s = 1.0;
  Mat3 matrix = Mat3::Ones();
};

inline ScaleSpec scale_spec(double d_max, double r_z) {
  if (!(r_z > 0.0)) throw DomainError(concat("altitude range must be positive, got ", r_z));
  if (!(r_z <= d_max)) throw DomainError("altitude range cannot exceed d_max");
  ScaleSpec spec;
  spec.d_max = d_max;
  spec.r_z = r_z;
  spec.s = std::sqrt(2.0 * (d_max * d_max - r_z * r_z)) / (2.0 * r_z);
  spec.matrix = Mat3::Ones();
  spec.matrix(0, 2) = spec.matrix(1, 2) = spec.matrix(2, 0) = spec.matrix(2, 1) = spec.s;
  spec.matrix(2, 2) = spec.s * spec.s;
  return spec;
}

inline Fim3 scaled_fim(const Fim3& f, const ScaleSpec& spec) {
  return Fim3{f.m.cwiseProduct(spec.matrix)};
}

// Cayley-Menger style decomposition of the same bound:
//   tr(I^-1) = (sigma_M^2 / 3) * f1 / f2
// f1: squared projected triangle areas (target, n, m) over (d_n d_m)^2,
// f2: squared tetrahedron volumes (target, n, m, l) over (d_n d_m d_l)^2.
// Both are full ordered sums; terms with repeated indices vanish.
class GeometryOracle {
 public:
  GeometryOracle(const Vec3& target, std::vector<Vec3> anchors)
      : target_(target), anchors_(std::move(anchors)) {
    if (anchors_.size() < 3) throw DegenerateGeometry("geometry oracle needs at least 3 anchors");
    diffs_.reserve(anchors_.size());
    dist_.reserve(anchors_.size());
    for (const Vec3& a : anchors_) {
      const Vec3 d = target_ - a;
      const double n = d.norm();
      if (!(n > 0.0)) throw DegenerateGeometry("anchor coincides with target");
      diffs_.push_back(d);
      dist_.push_back(n);
    }
  }

  // Area of triangle (target, n, m) projected on the plane of axes (i, j).
  double projected_area(std::size_t n, std::size_t m, int i, int j) const {
    return 0.5 * (diffs_[n][i] * diffs_[m][j] - diffs_[n][j] * diffs_[m][i]);
  }

  // Signed volume of tetrahedron (target, n, m, l).
  double volume(std::size_t n, std::size_t m, std::size_t l) const {
    Mat3 rows;
    rows.row(0) = diffs_[n].transpose();
    rows.row(1) = diffs_[m].transpose();
    rows.row(2) = diffs_[l].transpose();
    return determinant(rows) / 6.0;
  }

  double f1() const {
    const std::size_t n = diffs_.size();
    double acc = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        const double xy = projected_area(a, b, 0, 1);
        const double yz = projected_area(a, b, 1, 2);
        const double xz = projected_area(a, b, 0, 2);
        const double dd = dist_[a] * dist_[b];
        acc += (xy * xy + yz * yz + xz * xz) / (dd * dd);
      }
    return 2.0 * acc;
  }

  double f2() const {
    const std::size_t n = diffs_.size();
    double acc = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t c = b + 1; c < n; ++c) {
          const double v = volume(a, b, c);
          const double ddd = dist_[a] * dist_[b] * dist_[c];
          acc += v * v / (ddd * ddd);
        }
    return 6.0 * acc;
  }

  std::size_t size() const { return diffs_.size(); }

 private:
  Vec3 target_;
  std::vector<Vec3> anchors_;
  std::vector<Vec3> diffs_;
  std::vector<double> dist_;
};

inline double oracle_crlb(const GeometryOracle& geom, double sigma_m) {
  if (!(sigma_m > 0.0)) throw DomainError("sigma_M must be positive");
  const double f1 = geom.f1();
  const double f2 = geom.f2();
  const double n = static_cast<double>(geom.size());
  // Each normalized volume term is at most 1/36, so f2 <= n^3 / 36.
  if (!(f2 > 1e-13 * n * n * n))
    throw DegenerateGeometry(concat("anchors coplanar with target (f2=", f2, ")"));
  return sigma_m * sigma_m / 3.0 * f1 / f2;
}

// Information mixture when a fraction p_a of the beacons is falsified.
inline Fim3 attacked_fim(const Fim3& clean, const Fim3& malicious, double p_a) {
  if (!(p_a >= 0.0 && p_a <= 1.0)) throw DomainError("p_a must lie in [0, 1]");
  return Fim3{(1.0 - p_a) * clean.m + p_a * malicious.m};
}

// CRLB under attack without detection. Jamming and manipulation inflate the
// modeled error to sigma_m_attacked on the falsified share. Bias shifts the
// density by B with probability p_a, which adds p_a |B|^2 to the clean bound.
inline double crlb2(const AttackMode& mode, double p_a, const Vec3& target,
                    std::span<const Vec3> anchors, double sigma_m, double sigma_m_attacked) {
  if (!(p_a >= 0.0 && p_a <= 1.0)) throw DomainError("p_a must lie in [0, 1]");
  const Fim3 clean = fim(target, anchors, sigma_m);
  if (const auto* bias = std::get_if<Bias>(&mode)) {
    return crlb_trace(clean) + p_a * bias->b.squaredNorm();
  }
  if (attack_parameter(mode) < 0.0) throw DomainError("attack parameter must be non-negative");
  if (p_a == 0.0) return crlb_trace(clean);
  const Fim3 bad = fim(target, anchors, sigma_m_attacked);
  return crlb_trace(attacked_fim(clean, bad, p_a));
}

}  // namespace uavloc
