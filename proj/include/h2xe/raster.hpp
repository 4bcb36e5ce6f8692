#pragma once

// Software wireframe rasterizer for camera-space segments: perspective
// divide, painter's order by depth, depth-keyed fade, binary PPM output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "h2xe/scene.hpp"

namespace h2xe {

struct RenderSettings {
  int width = 800;
  int height = 800;
  double fov_y = 100.0 * std::numbers::pi / 180.0;  // vertical field of view
  double near = kDefaultNearClip;
  Rgb background{0.10, 0.10, 0.12};
  double fog_distance = 3.0;  // 0 disables the depth fade
};

struct FrameImage {
  int width = 0;
  int height = 0;
  double fov_y = 0.0;
  double near = 0.0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  std::array<std::uint8_t, 3> pixel(int x, int y) const {
    const std::size_t o = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
    return {rgb[o], rgb[o + 1], rgb[o + 2]};
  }
};

namespace detail {
inline std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

// Liang-Barsky against [x0, x1] × [y0, y1].
inline bool clip_rect(double& ax, double& ay, double& bx, double& by, double x0, double y0, double x1, double y1) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = bx - ax, dy = by - ay;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {ax - x0, x1 - ax, ay - y0, y1 - ay};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
  }
  const double nax = ax + t0 * dx, nay = ay + t0 * dy;
  bx = ax + t1 * dx;
  by = ay + t1 * dy;
  ax = nax;
  ay = nay;
  return true;
}
}  // namespace detail

/// Pixel position of a camera-space point (forward must be positive).
/// Pixel (x, y) is centred on integer coordinates.
inline std::array<double, 2> screen_position(const Vec3& c, const RenderSettings& s) {
  const double f = (s.height / 2.0) / std::tan(s.fov_y / 2.0);
  return {(s.width - 1) / 2.0 + f * c[0] / c[2], (s.height - 1) / 2.0 - f * c[1] / c[2]};
}

namespace detail {
// Snap to a 2^-20 grid so roundoff-level differences in the input cannot
// change the drawn pixels or the drawing order.
inline double snap(double v) { return std::round(v * 1048576.0) / 1048576.0; }
}  // namespace detail

inline FrameImage render_frame(std::span<const ProjectedSegment> segments, const RenderSettings& s) {
  if (s.width <= 0 || s.height <= 0) throw std::invalid_argument("render_frame: image has zero area");
  if (!(s.fov_y > 0.0 && s.fov_y < std::numbers::pi)) throw std::invalid_argument("render_frame: fov must be in (0, pi)");

  FrameImage img{s.width, s.height, s.fov_y, s.near, {}};
  img.rgb.resize(static_cast<std::size_t>(s.width) * static_cast<std::size_t>(s.height) * 3);
  const std::uint8_t bg[3] = {detail::to_byte(s.background.r), detail::to_byte(s.background.g),
                              detail::to_byte(s.background.b)};
  for (std::size_t i = 0; i < img.rgb.size(); i += 3) std::copy(bg, bg + 3, img.rgb.begin() + static_cast<long>(i));

  std::vector<std::size_t> order(segments.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) {
                     return detail::snap(segments[l].depth_key) > detail::snap(segments[r].depth_key);
                   });

  for (std::size_t idx : order) {
    const ProjectedSegment& seg = segments[idx];
    Vec3 a = seg.a, b = seg.b;
    if (!detail::clip_near(a, b, s.near)) continue;
    auto [ax, ay] = screen_position(a, s);
    auto [bx, by] = screen_position(b, s);
    ax = detail::snap(ax);
    ay = detail::snap(ay);
    bx = detail::snap(bx);
    by = detail::snap(by);
    if (!detail::clip_rect(ax, ay, bx, by, -0.5, -0.5, s.width - 0.5, s.height - 0.5)) continue;

    const double fade = s.fog_distance > 0.0 ? std::exp(-seg.depth_key / s.fog_distance) : 1.0;
    const std::uint8_t col[3] = {
        detail::to_byte(seg.color.r * fade + s.background.r * (1.0 - fade)),
        detail::to_byte(seg.color.g * fade + s.background.g * (1.0 - fade)),
        detail::to_byte(seg.color.b * fade + s.background.b * (1.0 - fade))};

    const double steps = std::max(1.0, std::ceil(std::max(std::abs(bx - ax), std::abs(by - ay))));
    const int n = static_cast<int>(steps);
    for (int i = 0; i <= n; ++i) {
      const double t = i / steps;
      const long px = std::lround(ax + t * (bx - ax));
      const long py = std::lround(ay + t * (by - ay));
      if (px < 0 || py < 0 || px >= s.width || py >= s.height) continue;
      const std::size_t o = (static_cast<std::size_t>(py) * static_cast<std::size_t>(s.width) + static_cast<std::size_t>(px)) * 3;
      std::copy(col, col + 3, img.rgb.begin() + static_cast<long>(o));
    }
  }
  return img;
}

/// Both eyes' views; each eye gets its own projection of the scene.
inline std::pair<FrameImage, FrameImage> render_stereo(const CameraPose& pose, const StereoConfig& cfg,
                                                       std::span<const Cell> cells, const SceneMesh& mesh,
                                                       const RenderSettings& s) {
  const auto [left, right] = eye_poses(pose, cfg);
  return {render_frame(project_scene(left, cells, mesh, s.near), s),
          render_frame(project_scene(right, cells, mesh, s.near), s)};
}

inline void write_ppm(std::ostream& os, const FrameImage& img) {
  os << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
}

inline void save_ppm(const std::string& path, const FrameImage& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::ios_base::failure("cannot open " + path + " for writing");
  write_ppm(os, img);
  if (!os) throw std::ios_base::failure("failed writing " + path);
}

/// Reads a P6 file with maxval 255 (comments are not supported).
inline FrameImage read_ppm(std::istream& is) {
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  is >> magic >> w >> h >> maxval;
  if (!is || magic != "P6" || maxval != 255 || w <= 0 || h <= 0) throw std::runtime_error("not a P6/255 image");
  is.get();
  FrameImage img{w, h, 0.0, 0.0, {}};
  img.rgb.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
  is.read(reinterpret_cast<char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
  if (is.gcount() != static_cast<std::streamsize>(img.rgb.size())) throw std::runtime_error("truncated image data");
  return img;
}

inline FrameImage load_ppm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::ios_base::failure("cannot open " + path);
  return read_ppm(is);
}

}  // namespace h2xe
