#include <sys/socket.h>
#include <unistd.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "catch_amalgamated.hpp"
#include "json.hpp"

#include "h2xe/net.hpp"
#include "h2xe/service.hpp"
#include "h2xe/verify.hpp"

using namespace h2xe;
using nlohmann::json;

namespace {

std::shared_ptr<const Scene> small_scene() {
  static const auto scene = Scene::build(TilingSpec{4, 6, 3, 1}, 2);
  return scene;
}

std::string move_line(Vec3 d, const Mat3& frame, std::int64_t seq) {
  return to_json(MotionMsg{d, frame, seq});
}

Mat3 skewed(double eps) {
  Mat3 f = Mat3::identity();
  f.a[1] = eps;
  return f;
}

}  // namespace

TEST_CASE("parse_motion reads a move message") {
  const MotionMsg m = parse_motion(R"({"kind":"move","seq":7,"d":[0.1,0,-0.2],"frame":[1,0,0,0,1,0,0,0,1]})");
  CHECK(m.seq == 7);
  CHECK(m.d[0] == 0.1);
  CHECK(m.d[2] == -0.2);
  CHECK(max_abs_diff(m.frame, Mat3::identity()) == 0.0);

  const MotionMsg back = parse_motion(to_json(m));
  CHECK(back.seq == m.seq);
  CHECK(back.d == m.d);
  CHECK(max_abs_diff(back.frame, m.frame) == 0.0);
}

TEST_CASE("parse_motion rejects malformed messages") {
  const char* bad[] = {
      "",
      "not json",
      "[1,2,3]",
      R"({"kind":"jump","seq":1,"d":[0,0,0],"frame":[1,0,0,0,1,0,0,0,1]})",
      R"({"seq":1,"d":[0,0,0],"frame":[1,0,0,0,1,0,0,0,1]})",
      R"({"kind":"move","d":[0,0,0],"frame":[1,0,0,0,1,0,0,0,1]})",
      R"({"kind":"move","seq":1.5,"d":[0,0,0],"frame":[1,0,0,0,1,0,0,0,1]})",
      R"({"kind":"move","seq":1,"d":[0,0],"frame":[1,0,0,0,1,0,0,0,1]})",
      R"({"kind":"move","seq":1,"d":[0,"x",0],"frame":[1,0,0,0,1,0,0,0,1]})",
      R"({"kind":"move","seq":1,"d":[0,0,0],"frame":[1,0,0,0,1,0,0,0]})",
      R"({"kind":"move","seq":1,"d":[0,0,0],"frame":[1,0,0,0,1,0,0,0,null]})",
  };
  for (const char* line : bad) {
    INFO(line);
    CHECK_THROWS_AS(parse_motion(line), ProtocolError);
  }
}

TEST_CASE("accept_frame thresholds") {
  const Mat3 ok = accept_frame(skewed(1e-3));
  CHECK(orthogonality_defect(ok) < 1e-12);
  CHECK(ok.determinant() == Catch::Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(accept_frame(skewed(0.5)), ProtocolError);

  Mat3 mirror = Mat3::identity();
  mirror.a[0] = -1.0;
  CHECK_THROWS_AS(accept_frame(mirror), ProtocolError);

  Mat3 nan = Mat3::identity();
  nan.a[4] = std::nan("");
  CHECK_THROWS_AS(accept_frame(nan), ProtocolError);
}

TEST_CASE("slightly skewed frame is accepted, badly skewed frame is an error") {
  Session s(small_scene(), 0.4);
  const json good = json::parse(s.handle_line(move_line({0, 0, 0.01}, skewed(1e-3), 1)));
  CHECK(good["kind"] == "geometry");
  CHECK(good["seq"] == 1);

  const json bad = json::parse(s.handle_line(move_line({0, 0, 0.01}, skewed(0.5), 2)));
  CHECK(bad["kind"] == "error");
  CHECK(bad["seq"] == 2);
  CHECK(bad["reason"].get<std::string>().find("orthogonal") != std::string::npos);
}

TEST_CASE("errors leave the session state unchanged") {
  Session s(small_scene(), 0.4);
  s.handle_line(move_line({0.1, 0, 0.3}, look_frame(0.2, 0.0), 1));
  const CameraPose before = s.pose();
  const std::string word = s.offset().str();

  for (const std::string& line : {std::string("garbage"), move_line({5, 5, 5}, skewed(0.5), 2),
                                  std::string(R"({"kind":"move","seq":3,"d":[1,1],"frame":[1,0,0,0,1,0,0,0,1]})")}) {
    const json r = json::parse(s.handle_line(line));
    CHECK(r["kind"] == "error");
    CHECK(r.contains("reason"));
  }
  CHECK(max_abs_diff(s.pose().frame, before.frame) == 0.0);
  CHECK(s.pose().loc.dz == before.loc.dz);
  CHECK(max_abs_diff(s.pose().loc.h, before.loc.h) == 0.0);
  CHECK(s.offset().str() == word);
}

TEST_CASE("zero delta with the same frame repeats the previous geometry") {
  Session s(small_scene(), 0.4);
  const Mat3 f = Mat3::identity();
  const std::string first = s.handle_line(move_line({0, 0, 0}, f, 1));
  json a = json::parse(first);
  json b = json::parse(s.handle_line(move_line({0, 0, 0}, f, 2)));
  CHECK(a["kind"] == "geometry");
  CHECK(a["seq"] == 1);
  CHECK(b["seq"] == 2);
  CHECK(a["segments"] == b["segments"]);
  CHECK(a["offset_word"] == b["offset_word"]);
  CHECK(!a["segments"].empty());
  CHECK(a["segments"].size() % 9 == 0);
}

TEST_CASE("geometry is the projected scene in camera coordinates") {
  const auto scene = small_scene();
  Session s(scene, 0.4);
  s.handle_line(move_line({0.2, -0.1, 0.4}, look_frame(0.4, -0.1), 1));
  const GeometryMsg g = s.handle_motion(MotionMsg{{0.0, 0.0, 0.1}, look_frame(0.5, -0.1), 2});
  const auto expected = project_scene(s.pose(), s.cells(), scene->mesh);
  REQUIRE(g.segments.size() == expected.size() * 9);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const ProjectedSegment& e = expected[i];
    const double* got = &g.segments[i * 9];
    CHECK(got[0] == e.a[0]);
    CHECK(got[1] == e.a[1]);
    CHECK(got[2] == e.a[2]);
    CHECK(got[3] == e.b[0]);
    CHECK(got[4] == e.b[1]);
    CHECK(got[5] == e.b[2]);
    CHECK(got[6] == e.color.r);
    CHECK(got[7] == e.color.g);
    CHECK(got[8] == e.color.b);
  }
  for (double v : g.segments) CHECK(std::isfinite(v));
}

TEST_CASE("identical message streams give identical replies") {
  std::vector<std::string> script;
  for (int i = 0; i < 60; ++i)
    script.push_back(move_line({0.01 * std::sin(i), 0.0, 0.06}, look_frame(0.05 * i, 0.02 * std::cos(i)), i));
  script.push_back("broken");

  auto replay = [&] {
    Session s(small_scene(), 0.4);
    std::string all;
    for (const auto& line : script) all += s.handle_line(line) + "\n";
    return all;
  };
  CHECK(replay() == replay());
}

TEST_CASE("straight walk grows the offset word and moves continuously") {
  const auto scene = small_scene();
  Session s(scene, 0.4);
  const double metres = 0.02 / 0.4;
  std::size_t last_len = 0;
  double worst_shift = 0.0;
  for (int i = 0; i < 200; ++i) {
    const CameraPose before = s.pose();
    const std::vector<Cell> cells_before = s.cells();
    const GeometryMsg g = s.handle_motion(MotionMsg{{0.0, 0.0, metres}, Mat3::identity(), i});
    CHECK(g.seq == i);
    CHECK(g.offset_word.size() >= last_len);
    last_len = g.offset_word.size();

    // Follow each cell through any teleport: camera moved by `step`, cells re-based by `jump`.
    const IsometryH2E step = translation_from_tangent(camera_displacement(Mat3::identity(), {0.0, 0.0, 0.02}));
    const IsometryH2E jump = iso_compose(s.pose().loc, iso_compose(before.loc, step).inverse());
    const IsometryH2E motion = iso_compose(s.pose().loc.inverse(), iso_compose(jump, before.loc));
    const auto cmp = verify::compare_views(before, cells_before, s.pose(), s.cells(), scene->mesh, motion);
    CHECK(cmp.matched > cells_before.size() / 2);
    CHECK(cmp.color_mismatches == 0);
    worst_shift = std::max(worst_shift, cmp.max_vertex_shift);
  }
  // 4 model units straight through cells of width 2·r_in.
  CHECK(last_len >= 2);
  CHECK(worst_shift < 0.25);
}

TEST_CASE("service config validation") {
  ServiceConfig c;
  CHECK_NOTHROW(c.validate());
  c.port = 80;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.port = 70000;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ServiceConfig{};
  c.frame_budget_ms = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ServiceConfig{};
  c.room_scale = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ServiceConfig{};
  c.spec.q = 5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("serve_stream answers one line per request") {
  Session s(small_scene(), 0.4);
  std::istringstream in(move_line({0, 0, 0}, Mat3::identity(), 1) + "\r\n\n   \nnope\n" +
                        move_line({0, 0, 0.1}, Mat3::identity(), 2) + "\n");
  std::ostringstream out;
  net::serve_stream(in, out, [&](std::string_view l) { return s.handle_line(l); });
  std::istringstream replies(out.str());
  std::vector<json> r;
  for (std::string line; std::getline(replies, line);) r.push_back(json::parse(line));
  REQUIRE(r.size() == 3);
  CHECK(r[0]["kind"] == "geometry");
  CHECK(r[1]["kind"] == "error");
  CHECK(r[2]["kind"] == "geometry");
  CHECK(r[2]["seq"] == 2);
}

TEST_CASE("tcp sessions are independent") {
  const auto scene = small_scene();
  net::TcpLineServer server(0, [scene] {
    auto session = std::make_shared<Session>(scene, 0.4);
    return [session](std::string_view l) { return session->handle_line(l); };
  });
  REQUIRE(server.port() > 0);
  std::thread loop([&] { server.run(); });

  auto request = [](int fd, const std::string& line) {
    REQUIRE(net::send_all(fd, line + "\n"));
    net::LineReader reader(fd);
    std::string reply;
    REQUIRE(reader.next(reply));
    return json::parse(reply);
  };

  const int a = net::connect_loopback(server.port());
  const int b = net::connect_loopback(server.port());
  const json a1 = request(a, move_line({0, 0, 0.5}, Mat3::identity(), 10));
  const json b1 = request(b, move_line({0, 0, 0}, Mat3::identity(), 20));
  const json a2 = request(a, move_line({0, 0, 0}, Mat3::identity(), 11));
  CHECK(a1["seq"] == 10);
  CHECK(b1["seq"] == 20);
  CHECK(a2["seq"] == 11);
  CHECK(a1["segments"] == a2["segments"]);
  CHECK(a1["segments"] != b1["segments"]);

  Session local(scene, 0.4);
  CHECK(json::parse(local.handle_line(move_line({0, 0, 0}, Mat3::identity(), 20))) == b1);

  ::close(a);
  ::close(b);
  server.stop();
  loop.join();
}
