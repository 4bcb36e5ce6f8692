#pragma once

// Frame service: owns one camera, applies per-frame motion messages, keeps
// the camera in the central cell by teleporting, and returns the scene as
// camera-space segments. Messages are newline-delimited JSON.

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "h2xe/scene.hpp"
#include "h2xe/tiling.hpp"

namespace h2xe {

struct ServiceConfig {
  int port = 8765;
  TilingSpec spec{4, 6, 5, 2};
  double room_scale = 0.4;  // model units per metre
  double frame_budget_ms = 16.0;
  int subdivisions = 8;

  void validate() const {
    if (port < 1024 || port > 65535) throw std::invalid_argument("port must be in [1024, 65535]");
    if (!(frame_budget_ms > 0.0)) throw std::invalid_argument("frame budget must be positive");
    if (!(room_scale > 0.0)) throw std::invalid_argument("room scale must be positive");
    spec.validate();
  }
};

struct MotionMsg {
  Vec3 d{0.0, 0.0, 0.0};  // camera-local metres
  Mat3 frame = Mat3::identity();
  std::int64_t seq = 0;
};

struct GeometryMsg {
  std::int64_t seq = 0;
  std::vector<double> segments;  // ax ay az bx by bz r g b per segment
  std::string offset_word;
};

/// Malformed or out-of-contract message.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest frame defect accepted (and then re-orthonormalized).
inline constexpr double kMaxFrameDefect = 0.01;

/// Orthonormal version of a client frame, or ProtocolError.
inline Mat3 accept_frame(const Mat3& f) {
  for (double v : f.a)
    if (!std::isfinite(v)) throw ProtocolError("frame has non-finite entries");
  const double defect = orthogonality_defect(f);
  if (!(defect < kMaxFrameDefect)) throw ProtocolError("frame is not orthogonal (defect " + std::to_string(defect) + ")");
  if (!(f.determinant() > 0.0)) throw ProtocolError("frame is a reflection");
  return orthonormalized(f);
}

inline MotionMsg parse_motion(std::string_view line) {
  const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ProtocolError("message is not a JSON object");
  if (!j.contains("kind") || j["kind"] != "move") throw ProtocolError("kind must be \"move\"");
  MotionMsg m;
  if (!j.contains("seq") || !j["seq"].is_number_integer()) throw ProtocolError("seq must be an integer");
  m.seq = j["seq"].get<std::int64_t>();
  if (!j.contains("d") || !j["d"].is_array() || j["d"].size() != 3) throw ProtocolError("d must hold 3 numbers");
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j["d"][i].is_number()) throw ProtocolError("d must hold 3 numbers");
    m.d[i] = j["d"][i].get<double>();
    if (!std::isfinite(m.d[i])) throw ProtocolError("d has non-finite entries");
  }
  if (!j.contains("frame") || !j["frame"].is_array() || j["frame"].size() != 9)
    throw ProtocolError("frame must hold 9 numbers");
  for (std::size_t i = 0; i < 9; ++i) {
    if (!j["frame"][i].is_number()) throw ProtocolError("frame must hold 9 numbers");
    m.frame.a[i] = j["frame"][i].get<double>();
  }
  return m;
}

inline std::string to_json(const MotionMsg& m) {
  nlohmann::json j{{"kind", "move"}, {"seq", m.seq}, {"d", m.d}, {"frame", m.frame.a}};
  return j.dump();
}

inline std::string to_json(const GeometryMsg& g) {
  nlohmann::json j{{"kind", "geometry"}, {"seq", g.seq}, {"segments", g.segments}, {"offset_word", g.offset_word}};
  return j.dump();
}

inline std::string error_json(std::string_view reason, const nlohmann::json& seq = nullptr) {
  nlohmann::json j{{"kind", "error"}, {"reason", reason}};
  if (!seq.is_null()) j["seq"] = seq;
  return j.dump();
}

/// Cells and mesh built once and shared read-only between sessions.
struct Scene {
  TilingSpec spec;
  std::vector<Cell> cells;
  SceneMesh mesh;

  static std::shared_ptr<const Scene> build(const TilingSpec& spec, int subdivisions) {
    auto s = std::make_shared<Scene>();
    s->spec = spec;
    s->cells = build_tiling(spec);
    s->mesh = build_cube_mesh(spec, subdivisions);
    return s;
  }
};

/// One camera owner. Not thread-safe; use one Session per connection.
class Session {
 public:
  Session(std::shared_ptr<const Scene> scene, double room_scale)
      : scene_(std::move(scene)), room_scale_(room_scale), cells_(scene_->cells) {}

  struct Frame {
    std::vector<ProjectedSegment> segments;
    int teleports = 0;
  };

  /// Move, teleport back into the central cell, project.
  Frame step(const Vec3& d, const Mat3& frame) {
    tracker_.move(RoomDelta{d, room_scale_}, frame);
    const int jumps = teleport(tracker_, scene_->spec, offset_);
    if (jumps > 0) recolor(cells_, offset_, scene_->spec.hue_step);
    return {project_scene(tracker_.pose(), cells_, scene_->mesh), jumps};
  }

  /// Current view without moving.
  std::vector<ProjectedSegment> view() const { return project_scene(tracker_.pose(), cells_, scene_->mesh); }

  GeometryMsg handle_motion(const MotionMsg& msg) {
    const Mat3 frame = accept_frame(msg.frame);
    const Frame f = step(msg.d, frame);
    GeometryMsg out{msg.seq, {}, offset_.str()};
    out.segments.reserve(f.segments.size() * 9);
    for (const ProjectedSegment& s : f.segments) {
      out.segments.insert(out.segments.end(),
                          {s.a[0], s.a[1], s.a[2], s.b[0], s.b[1], s.b[2], s.color.r, s.color.g, s.color.b});
    }
    return out;
  }

  /// One protocol line in, one reply line out. Errors leave state untouched.
  std::string handle_line(std::string_view line) {
    MotionMsg msg;
    try {
      msg = parse_motion(line);
      accept_frame(msg.frame);
    } catch (const ProtocolError& e) {
      const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      nlohmann::json seq = nullptr;
      if (j.is_object() && j.contains("seq") && j["seq"].is_number_integer()) seq = j["seq"];
      return error_json(e.what(), seq);
    }
    return to_json(handle_motion(msg));
  }

  const CameraPose& pose() const { return tracker_.pose(); }
  const CellWord& offset() const { return offset_; }
  const std::vector<Cell>& cells() const { return cells_; }

 private:
  std::shared_ptr<const Scene> scene_;
  double room_scale_;
  PoseTracker tracker_;
  CellWord offset_;
  std::vector<Cell> cells_;
};

}  // namespace h2xe
