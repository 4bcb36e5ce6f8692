#pragma once

// Exponential map at the origin, its inverse (the screen projection), and
// the Klein×E chart used to author meshes.

#include <cmath>
#include <stdexcept>

#include "h2xe/core.hpp"

namespace h2xe {

/// Klein-disk coordinates (x, y) with x² + y² < 1, plus the height z.
struct KleinPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline PointH2E exp_map(const TangentVec& dir) { return geodesic_point(dir, 1.0); }

namespace detail {
// arcsinh(r)/r, using its series near r = 0 where the quotient cancels.
inline double asinh_over(double r) {
  if (r < 1e-4) {
    const double r2 = r * r;
    return 1.0 - r2 / 6.0 + 3.0 * r2 * r2 / 40.0;
  }
  return std::asinh(r) / r;
}
}  // namespace detail

/// Initial velocity reaching p at t = 1:
/// (x, y, z, w) ↦ (asinh(r)/r · x, asinh(r)/r · y, z), r = √(x² + y²).
inline TangentVec inv_exp_map(const PointH2E& p) {
  const double f = detail::asinh_over(std::hypot(p.v.x, p.v.y));
  return {f * p.v.x, f * p.v.y, p.v.z};
}

/// (x, y, z) ↦ (x, y, z, 1)/√(1 − x² − y²) on the H² block.
inline PointH2E klein_lift(const KleinPoint& k) {
  const double r2 = k.x * k.x + k.y * k.y;
  if (!(r2 < 1.0)) throw std::domain_error("klein_lift: point lies outside the open unit disk");
  const double s = 1.0 / std::sqrt(1.0 - r2);
  return PointH2E{{k.x * s, k.y * s, k.z, s}};
}

inline KleinPoint klein_project(const PointH2E& p) { return {p.v.x / p.v.w, p.v.y / p.v.w, p.v.z}; }

/// Angle at the origin between the true direction to p (inverse exponential
/// map) and the naive straight-line direction to its Klein×E image.
inline double klein_straightline_error(const PointH2E& p) {
  const TangentVec t = inv_exp_map(p);
  const KleinPoint k = klein_project(p);
  const double a[3] = {t.u, t.v, t.z};
  const double b[3] = {k.x, k.y, k.z};
  const double cx = a[1] * b[2] - a[2] * b[1];
  const double cy = a[2] * b[0] - a[0] * b[2];
  const double cz = a[0] * b[1] - a[1] * b[0];
  const double cr = std::sqrt(cx * cx + cy * cy + cz * cz);
  const double d = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  if (cr == 0.0 && d == 0.0) return 0.0;
  return std::atan2(cr, d);
}

}  // namespace h2xe
