#pragma once

// Isometries of H²×E kept in product form: an O(2,1)⁺ block acting on
// (x, y, w) and a translation along z. Also the camera pose, the per-frame
// relative-motion update and loop holonomy.

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "h2xe/core.hpp"
#include "h2xe/linalg.hpp"
#include "h2xe/maps.hpp"

namespace h2xe {

/// Raised when an isometry has drifted too far from O(2,1) to be repaired.
class PoseCorruptedError : public std::runtime_error {
 public:
  explicit PoseCorruptedError(double defect)
      : std::runtime_error("isometry defect " + std::to_string(defect) + " exceeds repair threshold"),
        defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// Raised by holonomy_angle when the legs do not return to the origin.
class LoopNotClosedError : public std::runtime_error {
 public:
  explicit LoopNotClosedError(double defect)
      : std::runtime_error("loop does not close: endpoint is " + std::to_string(defect) + " from the origin"),
        defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

struct IsometryH2E {
  Mat3 h = Mat3::identity();  // acts on (x, y, w)
  double dz = 0.0;

  static constexpr IsometryH2E identity() { return {}; }
  static constexpr IsometryH2E translate_z(double dz) { return {Mat3::identity(), dz}; }

  /// Rotation by `angle` about the vertical axis through the origin.
  static IsometryH2E rotation(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}}, 0.0};
  }

  /// Inverse via H⁻¹ = J Hᵀ J.
  IsometryH2E inverse() const {
    Mat3 t = h.transposed();
    t(0, 2) = -t(0, 2);
    t(1, 2) = -t(1, 2);
    t(2, 0) = -t(2, 0);
    t(2, 1) = -t(2, 1);
    return {t, -dz};
  }

  /// Largest entry of |HᵀJH − J|.
  double defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const double v = h(0, i) * h(0, j) + h(1, i) * h(1, j) - h(2, i) * h(2, j);
        const double target = i != j ? 0.0 : (i == 2 ? -1.0 : 1.0);
        worst = std::max(worst, std::abs(v - target));
      }
    }
    return worst;
  }

  /// Group invariants: Minkowski-orthogonal, sheet- and orientation-preserving.
  bool is_valid(double tol = 1e-9) const {
    return defect() <= tol && h(2, 2) >= 1.0 - tol && std::abs(h.determinant() - 1.0) <= tol * 10;
  }
};

inline IsometryH2E iso_compose(const IsometryH2E& a, const IsometryH2E& b) {
  return {a.h * b.h, a.dz + b.dz};
}

inline PointH2E iso_apply(const IsometryH2E& g, const PointH2E& p) {
  const Vec3 hv = g.h * Vec3{p.v.x, p.v.y, p.v.w};
  return PointH2E{{hv[0], hv[1], p.v.z + g.dz, hv[2]}};
}

/// Translation taking the origin to exp_map(dir) without rotating the
/// tangent frame there: the boost of size |(u, v)| along θ₀, plus z.
inline IsometryH2E translation_from_tangent(const TangentVec& dir) {
  const double rho = dir.radial();
  if (rho == 0.0) return IsometryH2E::translate_z(dir.z);
  const double c = dir.u / rho, s = dir.v / rho;
  const double ch = std::cosh(rho), sh = std::sinh(rho), k = ch - 1.0;
  return {Mat3{{1.0 + k * c * c, k * c * s, sh * c,  //
                k * c * s, 1.0 + k * s * s, sh * s,  //
                sh * c, sh * s, ch}},
          dir.z};
}

/// Defect at or above which renormalize refuses to repair.
inline constexpr double kMaxRepairableDefect = 0.01;

namespace detail {
// Minkowski Gram-Schmidt on the columns of H: the timelike column first,
// then the two spacelike ones against it.
inline IsometryH2E minkowski_gram_schmidt(const IsometryH2E& g) {
  auto ip = [](const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] - a[2] * b[2]; };
  auto axpy = [](Vec3 y, double a, const Vec3& x) {
    for (std::size_t i = 0; i < 3; ++i) y[i] += a * x[i];
    return y;
  };

  Vec3 t = g.h.column(2);
  t = scaled(t, 1.0 / std::sqrt(-ip(t, t)));
  Vec3 e0 = axpy(g.h.column(0), ip(g.h.column(0), t), t);
  e0 = scaled(e0, 1.0 / std::sqrt(ip(e0, e0)));
  Vec3 e1 = g.h.column(1);
  e1 = axpy(e1, ip(e1, t), t);
  e1 = axpy(e1, -ip(e1, e0), e0);
  e1 = scaled(e1, 1.0 / std::sqrt(ip(e1, e1)));

  IsometryH2E out{Mat3{}, g.dz};
  out.h.set_column(0, e0);
  out.h.set_column(1, e1);
  out.h.set_column(2, t);
  return out;
}
}  // namespace detail

/// Snap H back onto O(2,1). Throws PoseCorruptedError when the defect is
/// too large to be roundoff drift.
inline IsometryH2E renormalize(const IsometryH2E& g) {
  const double defect = g.defect();
  if (!(defect < kMaxRepairableDefect)) throw PoseCorruptedError(defect);
  return detail::minkowski_gram_schmidt(g);
}

// Camera axes. Camera-local vectors are (right, up, forward). With the
// identity frame the camera looks level along +v, right is +u and up is +z
// (the E direction).

inline TangentVec level_to_tangent(const Vec3& l) { return {l[0], l[2], l[1]}; }
inline Vec3 tangent_to_level(const TangentVec& t) { return {t.u, t.z, t.v}; }

/// Orientation with the given yaw (turning right) and pitch (looking up).
inline Mat3 look_frame(double yaw, double pitch) {
  const Vec3 forward{std::sin(yaw) * std::cos(pitch), std::sin(pitch), std::cos(yaw) * std::cos(pitch)};
  const Vec3 right{std::cos(yaw), 0.0, -std::sin(yaw)};
  const Vec3 up = cross(forward, right);
  Mat3 f;
  f.set_column(0, right);
  f.set_column(1, up);
  f.set_column(2, forward);
  return f;
}

struct CameraPose {
  IsometryH2E loc;                   // origin → camera position
  Mat3 frame = Mat3::identity();     // columns: right, up, forward
};

/// One frame of room motion, in metres along camera-local axes.
struct RoomDelta {
  Vec3 d{0.0, 0.0, 0.0};
  double scale = 0.4;  // model units per metre
};

/// Tangent vector at the camera for a camera-local displacement.
inline TangentVec camera_displacement(const Mat3& frame, const Vec3& local) {
  return level_to_tangent(frame * local);
}

/// Camera-local (right, up, forward) coordinates of a tangent vector.
inline Vec3 to_camera(const Mat3& frame, const TangentVec& t) {
  return frame.transposed() * tangent_to_level(t);
}

/// Relative motion: move by the room delta measured in the camera's own
/// tangent space, then adopt the new orientation.
inline CameraPose apply_motion(const CameraPose& pose, const RoomDelta& delta, const Mat3& new_frame) {
  const TangentVec step = camera_displacement(pose.frame, scaled(delta.d, delta.scale));
  return {iso_compose(pose.loc, translation_from_tangent(step)), new_frame};
}

/// Owns a camera pose and keeps its isometry on O(2,1): renormalizes every
/// `kCadence` composes or as soon as the defect passes `kDriftTrigger`.
class PoseTracker {
 public:
  static constexpr int kCadence = 100;
  static constexpr double kDriftTrigger = 1e-8;

  PoseTracker() = default;
  explicit PoseTracker(CameraPose pose) : pose_(pose) {}

  const CameraPose& pose() const { return pose_; }

  void move(const RoomDelta& delta, const Mat3& new_frame) {
    pose_ = apply_motion(pose_, delta, new_frame);
    after_compose();
  }

  /// loc ← g · loc (used by teleportation).
  void premultiply(const IsometryH2E& g) {
    pose_.loc = iso_compose(g, pose_.loc);
    after_compose();
  }

  int renormalizations() const { return renormalizations_; }

 private:
  void after_compose() {
    if (++since_renormalize_ >= kCadence || pose_.loc.defect() > kDriftTrigger) {
      pose_.loc = renormalize(pose_.loc);
      since_renormalize_ = 0;
      ++renormalizations_;
    }
  }

  CameraPose pose_;
  int since_renormalize_ = 0;
  int renormalizations_ = 0;
};

/// Residual rotation after walking the legs in sequence, each leg given in
/// the frame carried along so far. Throws LoopNotClosedError if the walk
/// does not return to within 1e-6 of the origin.
inline double holonomy_angle(std::span<const TangentVec> legs) {
  IsometryH2E g;
  for (const auto& leg : legs) g = iso_compose(g, translation_from_tangent(leg));
  const PointH2E end = iso_apply(g, PointH2E::origin());
  const double miss = std::hypot(std::asinh(std::hypot(end.v.x, end.v.y)), end.v.z);
  if (miss > 1e-6) throw LoopNotClosedError(miss);
  return std::atan2(g.h(1, 0) - g.h(0, 1), g.h(0, 0) + g.h(1, 1));
}

}  // namespace h2xe
