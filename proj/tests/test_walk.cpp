#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "catch_amalgamated.hpp"

#include "h2xe/maps.hpp"
#include "h2xe/service.hpp"
#include "h2xe/walk.hpp"

using namespace h2xe;

namespace {

std::vector<WalkStep> parse(const std::string& text) {
  std::istringstream is(text);
  return parse_walk(is);
}

std::vector<WalkStep> load(const std::string& name) {
  std::ifstream is(std::string(H2XE_WALKS_DIR) + "/" + name);
  REQUIRE(is);
  return parse_walk(is);
}

}  // namespace

TEST_CASE("walk lines with and without a frame") {
  const auto steps = parse("0.1 0.2 0.3\n0 0 1  1 0 0 0 1 0 0 0 1\n");
  REQUIRE(steps.size() == 2);
  CHECK(steps[0].d == Vec3{0.1, 0.2, 0.3});
  CHECK_FALSE(steps[0].frame.has_value());
  REQUIRE(steps[1].frame.has_value());
  CHECK(max_abs_diff(*steps[1].frame, Mat3::identity()) == 0.0);
}

TEST_CASE("frame entries are row-major") {
  const auto steps = parse("0 0 0 1 2 3 4 5 6 7 8 9\n");
  REQUIRE(steps[0].frame.has_value());
  CHECK(steps[0].frame->a[1] == 2.0);
  CHECK(steps[0].frame->a[3] == 4.0);
}

TEST_CASE("comments and blank lines are skipped") {
  const auto steps = parse("# header\n\n   \n1 2 3  # trailing\n\t\n# 4 5 6\n-1e-2 0 .5\n");
  REQUIRE(steps.size() == 2);
  CHECK(steps[0].d == Vec3{1, 2, 3});
  CHECK(steps[1].d == Vec3{-0.01, 0, 0.5});
  CHECK(parse("").empty());
  CHECK(parse("# only\n").empty());
}

TEST_CASE("bad walk lines report their line number") {
  auto message = [](const std::string& text) {
    try {
      parse(text);
    } catch (const std::runtime_error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("1 2 3\n1 2\n").find("line 2") != std::string::npos);
  CHECK(message("# c\n\n1 2 3 4\n").find("line 3") != std::string::npos);
  CHECK(message("1 2 x\n").find("line 1") != std::string::npos);
  CHECK(message("1 2 3 1 0 0 0 1 0 0 0\n").find("got 11") != std::string::npos);
  CHECK(message("1 2 3\n").empty());
}

TEST_CASE("aspect ratio walk stops at the listed fractions of a cell width") {
  const auto steps = load("aspect_ratio.walk");
  REQUIRE(steps.size() == 6);
  const double stations[] = {0.0, 1.0 / 6, 1.0 / 3, 1.0 / 2, 2.0 / 3, 1.0};
  double travelled = 0.0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    CHECK(steps[i].d[0] == 0.0);
    CHECK(steps[i].d[1] == 0.0);
    CHECK_FALSE(steps[i].frame.has_value());
    travelled += steps[i].d[2] * 0.4;
    CHECK(travelled == Catch::Approx(stations[i] * honeycomb46::kTranslationLength).margin(1e-6));
  }
}

TEST_CASE("straight line walk teleports through five faces in a row") {
  const auto steps = load("straight_line.walk");
  REQUIRE(steps.size() == 21);
  Session s(Scene::build(TilingSpec{4, 6, 5, 2}, 2), 0.4);
  Mat3 frame = Mat3::identity();
  int jumps = 0;
  for (const WalkStep& st : steps) {
    if (st.frame) frame = *st.frame;
    jumps += s.step(st.d, frame).teleports;
  }
  CHECK(jumps == 5);
  CHECK(s.offset().str() == "AAAAA");
}

TEST_CASE("square loop in the room does not close in the H2 plane") {
  const auto steps = load("parallel_transport.walk");
  REQUIRE(steps.size() == 5);
  PoseTracker t;
  for (const WalkStep& st : steps) t.move(RoomDelta{st.d, 0.4}, st.frame.value_or(t.pose().frame));
  const PointH2E end = iso_apply(t.pose().loc, PointH2E::origin());
  const TangentVec back = inv_exp_map(end);
  CHECK(std::hypot(back.u, back.v) > 0.01);
  CHECK(std::abs(back.z) < 1e-12);

  // Remaining rotation once the displacement is undone.
  const IsometryH2E r = iso_compose(translation_from_tangent(back).inverse(), t.pose().loc);
  const double angle = std::atan2(r.h(1, 0), r.h(0, 0));
  CHECK(std::abs(angle) > 0.01);
  CHECK(r.h(2, 2) == Catch::Approx(1.0).margin(1e-9));
}
