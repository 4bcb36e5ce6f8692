#pragma once

// Cube meshes authored in Klein×E, lifted to the model, and projected for
// drawing: every vertex goes through the camera isometry and then the
// inverse exponential map, which yields ordinary E³ coordinates.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "h2xe/isometry.hpp"
#include "h2xe/maps.hpp"
#include "h2xe/tiling.hpp"

namespace h2xe {

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Cyclic colour map black → red → white → cyan → black, t in [0, 1).
inline Rgb color_circle(double t) {
  t = t - std::floor(t);
  const double s = t * 4.0;
  const int seg = std::min(3, static_cast<int>(s));
  const double f = s - seg;
  switch (seg) {
    case 0: return {f, 0.0, 0.0};
    case 1: return {1.0, f, f};
    case 2: return {1.0 - f, 1.0, 1.0};
    default: return {0.0, 1.0 - f, 1.0 - f};
  }
}

/// The six quotient labels sit evenly around the colour circle; each layer
/// turns the circle by its phase.
inline Rgb cell_rgb(const ColorIndex& c) { return color_circle((c.base + 0.5) / 6.0 + c.layer_phase); }

struct MeshSegment {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double shade = 1.0;  // multiplies the cell colour
};

/// Vertices on the model plus index pairs. Drawn once per cell with that
/// cell's isometry.
struct SceneMesh {
  std::vector<PointH2E> vertices;
  std::vector<MeshSegment> segments;
};

/// Edges of the central cube: square section with vertices at Klein
/// (±k, ±k), faces at z = ±h/2, every edge split into `subdivisions`
/// pieces in Klein×E and lifted. The 8 corners come first.
inline SceneMesh build_cube_mesh(const TilingSpec& spec, int subdivisions) {
  if (subdivisions < 1) throw std::invalid_argument("build_cube_mesh: subdivisions must be at least 1");
  spec.validate();
  const double k = honeycomb46::kEdgeKlein;
  const double hz = spec.cube_height / 2.0;

  SceneMesh mesh;
  std::vector<KleinPoint> corners;
  for (int iz = 0; iz < 2; ++iz)
    for (int iy = 0; iy < 2; ++iy)
      for (int ix = 0; ix < 2; ++ix) corners.push_back({ix ? k : -k, iy ? k : -k, iz ? hz : -hz});
  for (const auto& c : corners) mesh.vertices.push_back(klein_lift(c));

  // Corner pairs differing in exactly one coordinate bit.
  for (std::uint32_t a = 0; a < 8; ++a) {
    for (std::uint32_t bit = 1; bit < 8; bit <<= 1) {
      const std::uint32_t b = a | bit;
      if (b == a) continue;
      const double shade = bit == 4 ? 0.8 : 1.0;  // vertical edges a little darker
      std::uint32_t prev = a;
      for (int s = 1; s <= subdivisions; ++s) {
        std::uint32_t cur = b;
        if (s < subdivisions) {
          const double f = static_cast<double>(s) / subdivisions;
          const KleinPoint& p = corners[a];
          const KleinPoint& q = corners[b];
          mesh.vertices.push_back(klein_lift({p.x + f * (q.x - p.x), p.y + f * (q.y - p.y), p.z + f * (q.z - p.z)}));
          cur = static_cast<std::uint32_t>(mesh.vertices.size() - 1);
        }
        mesh.segments.push_back({prev, cur, shade});
        prev = cur;
      }
    }
  }
  return mesh;
}

/// A drawable segment in camera coordinates (right, up, forward).
struct ProjectedSegment {
  Vec3 a{};
  Vec3 b{};
  Rgb color;
  double depth_key = 0.0;  // tangent-space distance of the midpoint
};

inline constexpr double kDefaultNearClip = 0.05;

/// Camera coordinates of p as seen from `pose`.
inline Vec3 project_point(const CameraPose& pose, const PointH2E& p) {
  return to_camera(pose.frame, inv_exp_map(iso_apply(pose.loc.inverse(), p)));
}

namespace detail {
inline Vec3 lerp(const Vec3& a, const Vec3& b, double t) {
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
}

/// Clip to forward ≥ near. Returns false when nothing is left.
inline bool clip_near(Vec3& a, Vec3& b, double near) {
  const bool ia = a[2] >= near, ib = b[2] >= near;
  if (ia && ib) return true;
  if (!ia && !ib) return false;
  const double t = (near - a[2]) / (b[2] - a[2]);
  const Vec3 p = lerp(a, b, t);
  (ia ? b : a) = Vec3{p[0], p[1], near};
  return true;
}
}  // namespace detail

/// Every mesh segment of every cell in camera coordinates, near-clipped.
inline std::vector<ProjectedSegment> project_scene(const CameraPose& pose, std::span<const Cell> cells,
                                                   const SceneMesh& mesh, double near = kDefaultNearClip) {
  std::vector<ProjectedSegment> out;
  out.reserve(cells.size() * mesh.segments.size());
  std::vector<Vec3> cam(mesh.vertices.size());
  const IsometryH2E view = pose.loc.inverse();
  const Mat3 to_cam = pose.frame.transposed();
  for (const Cell& cell : cells) {
    const IsometryH2E m = iso_compose(view, cell.g);
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
      cam[i] = to_cam * tangent_to_level(inv_exp_map(iso_apply(m, mesh.vertices[i])));
    }
    const Rgb base = cell_rgb(cell.color);
    for (const MeshSegment& s : mesh.segments) {
      Vec3 a = cam[s.i], b = cam[s.j];
      if (!detail::clip_near(a, b, near)) continue;
      const Vec3 mid = detail::lerp(a, b, 0.5);
      out.push_back({a, b, Rgb{base.r * s.shade, base.g * s.shade, base.b * s.shade}, norm(mid)});
    }
  }
  return out;
}

struct StereoConfig {
  double eye_separation = 0.064 * 0.4;  // total, model units
};

/// Left and right eye poses: the camera moved ∓separation/2 along its own
/// right axis, orientation unchanged (eyes looking straight ahead).
inline std::pair<CameraPose, CameraPose> eye_poses(const CameraPose& pose, const StereoConfig& cfg) {
  if (!(cfg.eye_separation >= 0.0) || !(cfg.eye_separation < 0.5))
    throw std::invalid_argument("eye separation must be in [0, 0.5)");
  const double h = cfg.eye_separation / 2.0;
  auto shifted = [&](double side) {
    return CameraPose{iso_compose(pose.loc, translation_from_tangent(camera_displacement(pose.frame, {side, 0.0, 0.0}))),
                      pose.frame};
  };
  return {shifted(-h), shifted(h)};
}

/// Horizontal bearing of p from the camera: the angle to its right of the
/// forward axis, in the camera's horizontal plane.
inline double bearing(const CameraPose& pose, const PointH2E& p) {
  const Vec3 c = project_point(pose, p);
  return std::atan2(c[0], c[2]);
}

}  // namespace h2xe
