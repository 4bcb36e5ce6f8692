#pragma once

// Canned viewpoints for the honeycomb figures: level along H², straight up
// along E, and two diagonal directions, all from the centre of the central cube.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "h2xe/raster.hpp"

namespace h2xe {

enum class View { H2, E, Diag, Diag2 };

inline std::optional<View> parse_view(std::string_view s) {
  if (s == "h2") return View::H2;
  if (s == "e") return View::E;
  if (s == "diag") return View::Diag;
  if (s == "diag2") return View::Diag2;
  return std::nullopt;
}

inline const char* view_name(View v) {
  switch (v) {
    case View::H2: return "h2";
    case View::E: return "e";
    case View::Diag: return "diag";
    case View::Diag2: return "diag2";
  }
  return "?";
}

inline Mat3 view_frame(View v) {
  constexpr double pi = std::numbers::pi;
  switch (v) {
    case View::H2: return look_frame(0.0, 0.0);
    case View::E: return look_frame(0.0, pi / 2);
    case View::Diag: return look_frame(0.0, pi / 4);
    case View::Diag2: return look_frame(pi / 4, std::atan(1.0 / std::sqrt(2.0)));  // toward a cube corner
  }
  return Mat3::identity();
}

inline FrameImage render_view(View v, const TilingSpec& spec, const RenderSettings& settings, int subdivisions = 8) {
  const auto cells = build_tiling(spec);
  const auto mesh = build_cube_mesh(spec, subdivisions);
  const CameraPose pose{IsometryH2E::identity(), view_frame(v)};
  return render_frame(project_scene(pose, cells, mesh, settings.near), settings);
}

}  // namespace h2xe
