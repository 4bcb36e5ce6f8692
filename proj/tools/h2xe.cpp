// h2xe: render views, replay walk scripts, dump the tiling, run the
// acceptance checks, and serve the frame protocol.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "httplib.h"

#include "h2xe/figures.hpp"
#include "h2xe/net.hpp"
#include "h2xe/service.hpp"
#include "h2xe/verify.hpp"
#include "h2xe/walk.hpp"

namespace {

using namespace h2xe;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TilingSpec make_spec(int depth, int layers) {
  TilingSpec spec;
  spec.depth = depth;
  spec.layers = layers;
  spec.validate();
  return spec;
}

FrameImage side_by_side(const FrameImage& l, const FrameImage& r) {
  FrameImage out{l.width * 2, l.height, l.fov_y, l.near, {}};
  out.rgb.resize(static_cast<std::size_t>(out.width) * out.height * 3);
  const std::size_t row = static_cast<std::size_t>(l.width) * 3;
  for (int y = 0; y < l.height; ++y) {
    std::copy_n(l.rgb.begin() + y * row, row, out.rgb.begin() + 2 * y * row);
    std::copy_n(r.rgb.begin() + y * row, row, out.rgb.begin() + 2 * y * row + row);
  }
  return out;
}

void save(const std::string& path, const FrameImage& img) {
  try {
    save_ppm(path, img);
  } catch (const std::exception&) {
    throw IoError("cannot write " + path);
  }
}

struct RenderArgs {
  std::string view = "h2";
  int depth = 7;
  int layers = 3;
  int width = 800;
  int height = 800;
  double stereo = -1.0;
  std::string out;
};

int cmd_render(const RenderArgs& a) {
  const auto view = parse_view(a.view);
  const TilingSpec spec = make_spec(a.depth, a.layers);
  RenderSettings rs;
  rs.width = a.width;
  rs.height = a.height;
  if (a.stereo < 0.0) {
    save(a.out, render_view(*view, spec, rs));
  } else {
    const auto cells = build_tiling(spec);
    const auto mesh = build_cube_mesh(spec, 8);
    const CameraPose pose{IsometryH2E::identity(), view_frame(*view)};
    const auto [l, r] = render_stereo(pose, StereoConfig{a.stereo}, cells, mesh, rs);
    save(a.out, side_by_side(l, r));
  }
  std::printf("wrote %s\n", a.out.c_str());
  return 0;
}

struct WalkArgs {
  std::string script;
  std::string out_dir;
  int depth = 5;
  int layers = 2;
  int width = 512;
  int height = 512;
  double room_scale = 0.4;
};

int cmd_walk(const WalkArgs& a) {
  std::ifstream in(a.script);
  if (!in) throw IoError("cannot read " + a.script);
  const std::vector<WalkStep> steps = parse_walk(in);
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw IoError("cannot create " + a.out_dir);

  RenderSettings rs;
  rs.width = a.width;
  rs.height = a.height;
  Session session(Scene::build(make_spec(a.depth, a.layers), 8), a.room_scale);
  Mat3 frame = Mat3::identity();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].frame) frame = accept_frame(*steps[i].frame);
    const Session::Frame f = session.step(steps[i].d, frame);
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.ppm", i);
    const std::string path = (std::filesystem::path(a.out_dir) / name).string();
    save(path, render_frame(f.segments, rs));
    std::printf("%s teleports=%d offset=%s\n", path.c_str(), f.teleports,
                session.offset().empty() ? "-" : session.offset().str().c_str());
  }
  return 0;
}

int cmd_dump(int depth, int layers) {
  const TilingSpec spec = make_spec(depth, layers);
  for (const Cell& c : build_tiling(spec)) {
    std::printf("%s\t%d", c.word.empty() ? "-" : c.word.str().c_str(), c.layer);
    for (double v : c.g.h.a) std::printf("\t%.17g", v);
    std::printf("\t%.17g\t%d\n", c.g.dz, c.color.base);
  }
  return 0;
}

int cmd_verify(const std::string& golden_dir) {
  int failed = 0;
  for (const auto& r : verify::run_all(golden_dir)) {
    std::printf("%s %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
  }
  std::printf("%d failed\n", failed);
  return failed == 0 ? 0 : kExitFailure;
}

struct ServeArgs {
  ServiceConfig cfg;
  bool pipe = false;
  bool public_bind = false;
  int http_port = 0;
  std::string static_dir;
};

int cmd_serve(const ServeArgs& a) {
  a.cfg.validate();
  const auto scene = Scene::build(a.cfg.spec, a.cfg.subdivisions);
  auto factory = [&]() -> net::LineHandler {
    auto session = std::make_shared<Session>(scene, a.cfg.room_scale);
    return [session](std::string_view line) { return session->handle_line(line); };
  };
  if (a.pipe) {
    net::serve_stream(std::cin, std::cout, factory());
    return 0;
  }

  std::thread http_thread;
  httplib::Server http;
  std::mutex http_mu;
  Session http_session(scene, a.cfg.room_scale);
  if (a.http_port > 0) {
    if (!a.static_dir.empty() && !http.set_mount_point("/", a.static_dir)) throw IoError("cannot serve " + a.static_dir);
    http.Post("/motion", [&](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(http_mu);
      res.set_content(http_session.handle_line(req.body), "application/json");
    });
    if (!http.bind_to_port(a.public_bind ? "0.0.0.0" : "127.0.0.1", a.http_port))
      throw IoError("cannot listen on HTTP port " + std::to_string(a.http_port));
    http_thread = std::thread([&] { http.listen_after_bind(); });
    std::fprintf(stderr, "http on port %d\n", a.http_port);
  }

  net::TcpLineServer server(a.cfg.port, factory, !a.public_bind);
  std::fprintf(stderr, "frame service on port %d (%zu cells)\n", server.port(), scene->cells.size());
  server.run();
  if (http_thread.joinable()) {
    http.stop();
    http_thread.join();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H2xE geometry engine and renderer"};
  app.require_subcommand(1);

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "Render a view from the central cell to a PPM file");
  render->add_option("--view", ra.view, "h2, e, diag or diag2")->check(CLI::IsMember({"h2", "e", "diag", "diag2"}));
  render->add_option("--depth", ra.depth, "Tiling depth")->check(CLI::Range(0, 12));
  render->add_option("--layers", ra.layers, "Vertical layers above and below")->check(CLI::NonNegativeNumber);
  render->add_option("--width", ra.width)->check(CLI::PositiveNumber);
  render->add_option("--height", ra.height)->check(CLI::PositiveNumber);
  render->add_option("--stereo", ra.stereo, "Eye separation in model units; writes left|right side by side")
      ->check(CLI::Range(0.0, 0.5));
  render->add_option("--out", ra.out, "Output PPM")->required();

  WalkArgs wa;
  auto* walk = app.add_subcommand("walk", "Replay a walk script, one PPM per step");
  walk->add_option("--script", wa.script)->required();
  walk->add_option("--out-dir", wa.out_dir)->required();
  walk->add_option("--depth", wa.depth)->check(CLI::Range(0, 12));
  walk->add_option("--layers", wa.layers)->check(CLI::NonNegativeNumber);
  walk->add_option("--width", wa.width)->check(CLI::PositiveNumber);
  walk->add_option("--height", wa.height)->check(CLI::PositiveNumber);
  walk->add_option("--room-scale", wa.room_scale, "Model units per metre")->check(CLI::PositiveNumber);

  int dump_depth = 3, dump_layers = 1;
  auto* dump = app.add_subcommand("dump-tiling", "Print cells as tab-separated values");
  dump->add_option("--depth", dump_depth)->check(CLI::Range(0, 12));
  dump->add_option("--layers", dump_layers)->check(CLI::NonNegativeNumber);

  std::string golden = H2XE_GOLDEN_DIR;
  auto* ver = app.add_subcommand("verify", "Run the acceptance checks");
  ver->add_option("--golden-dir", golden);

  ServeArgs sa;
  auto* serve = app.add_subcommand("serve", "Serve the frame protocol");
  serve->add_option("--port", sa.cfg.port)->check(CLI::Range(1024, 65535));
  serve->add_flag("--pipe", sa.pipe, "Use stdin/stdout instead of a socket");
  serve->add_flag("--public", sa.public_bind, "Listen on all interfaces");
  serve->add_option("--http-port", sa.http_port, "Also serve HTTP (static page, POST /motion)")->check(CLI::Range(1024, 65535));
  serve->add_option("--static-dir", sa.static_dir)->check(CLI::ExistingDirectory);
  serve->add_option("--depth", sa.cfg.spec.depth)->check(CLI::Range(0, 12));
  serve->add_option("--layers", sa.cfg.spec.layers)->check(CLI::NonNegativeNumber);
  serve->add_option("--room-scale", sa.cfg.room_scale)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*render) return cmd_render(ra);
    if (*walk) return cmd_walk(wa);
    if (*dump) return cmd_dump(dump_depth, dump_layers);
    if (*ver) return cmd_verify(golden);
    if (*serve) return cmd_serve(sa);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}
