#pragma once

// Acceptance checks, shared by the acceptance test binary and `h2xe verify`.
// Each check returns a named pass/fail with the measured quantities.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "h2xe/figures.hpp"
#include "h2xe/oracles.hpp"
#include "h2xe/service.hpp"

namespace h2xe::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace detail

/// Correspondence between two views of the same honeycomb. rel = loc⁻¹·g is
/// a cell's placement relative to the camera; cell b of the second view
/// matches cell a of the first when rel_b·origin = motion·rel_a·origin.
struct ViewComparison {
  double max_vertex_shift = 0.0;  // camera-space, over matched cells
  std::size_t matched = 0;
  std::size_t color_mismatches = 0;
};

inline ViewComparison compare_views(const CameraPose& pa, const std::vector<Cell>& ca, const CameraPose& pb,
                                    const std::vector<Cell>& cb, const SceneMesh& mesh, const IsometryH2E& motion) {
  ViewComparison out;
  const IsometryH2E va = pa.loc.inverse(), vb = pb.loc.inverse();
  std::vector<PointH2E> centers_b;
  centers_b.reserve(cb.size());
  for (const Cell& c : cb) centers_b.push_back(iso_apply(iso_compose(vb, c.g), PointH2E::origin()));

  auto project_cell = [&](const CameraPose& pose, const Cell& c) {
    std::vector<Vec3> v;
    v.reserve(mesh.vertices.size());
    for (const PointH2E& p : mesh.vertices) v.push_back(project_point(pose, iso_apply(c.g, p)));
    return v;
  };

  for (const Cell& a : ca) {
    const PointH2E want = iso_apply(iso_compose(motion, iso_compose(va, a.g)), PointH2E::origin());
    std::size_t best = cb.size();
    for (std::size_t j = 0; j < cb.size(); ++j) {
      const PointH2E& c = centers_b[j];
      const double d = std::hypot(std::hypot(c.v.x - want.v.x, c.v.y - want.v.y), std::hypot(c.v.z - want.v.z, c.v.w - want.v.w));
      if (d <= 1e-6 * std::max(1.0, want.v.w)) {
        best = j;
        break;
      }
    }
    if (best == cb.size()) continue;
    ++out.matched;
    const Cell& b = cb[best];
    if (a.color.base != b.color.base || std::abs(a.color.layer_phase - b.color.layer_phase) > 1e-12) ++out.color_mismatches;
    const auto pa_v = project_cell(pa, a);
    const auto pb_v = project_cell(pb, b);
    for (const Vec3& x : pa_v) {
      double nearest = 1e300;
      for (const Vec3& y : pb_v) nearest = std::min(nearest, norm(Vec3{x[0] - y[0], x[1] - y[1], x[2] - y[2]}));
      out.max_vertex_shift = std::max(out.max_vertex_shift, nearest);
    }
  }
  return out;
}

/// exp/inverse-exp round trips and the geodesic equation on random vectors.
inline CheckResult geodesic_exp() {
  detail::Stopwatch sw;
  std::mt19937_64 rng(oracle::seed());
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> samples;
  for (int i = 0; i < 50; ++i) samples.push_back(0.1 + 0.9 * i / 49.0);

  double worst_a = 0.0, worst_b = 0.0, worst_res = 0.0;
  for (int i = 0; i < 1000; ++i) {
    TangentVec t{unit(rng), unit(rng), unit(rng)};
    const double n = t.length();
    const double target = 5.0 * std::abs(unit(rng));
    if (n > 0) t = {t.u / n * target, t.v / n * target, t.z / n * target};
    const TangentVec back = inv_exp_map(exp_map(t));
    worst_a = std::max({worst_a, std::abs(back.u - t.u), std::abs(back.v - t.v), std::abs(back.z - t.z)});
    const PointH2E p = exp_map(t);
    const PointH2E again = exp_map(inv_exp_map(p));
    worst_b = std::max({worst_b, std::abs(again.v.x - p.v.x), std::abs(again.v.y - p.v.y), std::abs(again.v.z - p.v.z),
                        std::abs(again.v.w - p.v.w)});
    if (t.radial() > 1e-3) worst_res = std::max(worst_res, geodesic_residual(t, samples));
  }
  const double secs = sw.seconds();
  const bool ok = worst_a <= 1e-9 && worst_b <= 1e-9 && worst_res < 1e-5 && secs < 5.0;
  return {"geodesic/exp correctness", ok,
          "inv_exp∘exp " + detail::fmt("%.2e", worst_a) + ", exp∘inv_exp " + detail::fmt("%.2e", worst_b) +
              " (tol 1e-9); geodesic residual " + detail::fmt("%.2e", worst_res) + " (tol 1e-5); " +
              detail::fmt("%.2f", secs) + " s (limit 5 s)",
          secs};
}

/// Finite-difference metric and Christoffel symbols on ρ ∈ {0.1, …, 5}.
inline CheckResult metric_christoffel() {
  detail::Stopwatch sw;
  double metric_err = 0.0, offdiag = 0.0, gamma_err = 0.0, zero_err = 0.0, printed_gap = 1e300;
  for (int i = 1; i <= 50; ++i) {
    const double rho = 0.1 * i;
    const auto g = oracle::fd_metric(rho, 0.7);
    const MetricTensor m = metric_components(rho);
    metric_err = std::max({metric_err, std::abs(g[0][0] - m.g_rho_rho), std::abs(g[1][1] - m.g_theta_theta),
                           std::abs(g[2][2] - m.g_z_z)});
    offdiag = std::max({offdiag, std::abs(g[0][1]), std::abs(g[0][2]), std::abs(g[1][2])});

    const auto G = oracle::christoffel_general([](double r) { return metric_components(r).g_theta_theta; }, rho);
    const ChristoffelTable c = christoffel(rho);
    gamma_err = std::max({gamma_err, std::abs(G[0][1][1] - c.rho_theta_theta), std::abs(G[1][0][1] - c.theta_rho_theta),
                          std::abs(G[1][1][0] - c.theta_rho_theta)});
    // Against the quoted closed forms too.
    gamma_err = std::max({gamma_err, std::abs(c.rho_theta_theta + std::cosh(rho) * std::sinh(rho)),
                          std::abs(c.theta_rho_theta - std::cosh(rho) / std::sinh(rho))});
    for (int l = 0; l < 3; ++l)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const bool listed = (l == 0 && a == 1 && b == 1) || (l == 1 && ((a == 0 && b == 1) || (a == 1 && b == 0)));
          if (!listed) zero_err = std::max(zero_err, std::abs(G[l][a][b]));
        }

    // The printed gθθ = sinh⁻²ρ pushed through the same formula.
    const auto P = oracle::christoffel_general([](double r) { return std::pow(std::sinh(r), -2.0); }, rho);
    const double gap = std::max(std::abs(P[0][1][1] + std::cosh(rho) * std::sinh(rho)),
                                std::abs(P[1][0][1] - std::cosh(rho) / std::sinh(rho)));
    printed_gap = std::min(printed_gap, gap);
  }
  const bool ok = metric_err <= 1e-6 && offdiag <= 1e-6 && gamma_err <= 1e-6 && zero_err <= 1e-6 && printed_gap > 0.1;
  return {"metric/Christoffel oracle", ok,
          "g vs FD " + detail::fmt("%.2e", metric_err) + ", off-diagonal " + detail::fmt("%.2e", offdiag) +
              ", Γ vs general formula " + detail::fmt("%.2e", gamma_err) + ", other Γ " + detail::fmt("%.2e", zero_err) +
              " (tol 1e-6); gθθ=sinh^-2 gives Γ off by ≥ " + detail::fmt("%.3f", printed_gap) + " (inconsistent)",
          sw.seconds()};
}

/// Loop that starts at the origin, visits `vertices` in order and returns.
inline std::vector<TangentVec> loop_legs(const std::vector<oracle::Ambient>& vertices) {
  std::vector<TangentVec> legs;
  IsometryH2E g;
  auto go = [&](const PointH2E& target) {
    const TangentVec leg = inv_exp_map(iso_apply(g.inverse(), target));
    legs.push_back(leg);
    g = iso_compose(g, translation_from_tangent(leg));
  };
  for (const auto& v : vertices) go(PointH2E{{v[0], v[1], v[2], v[3]}});
  go(PointH2E::origin());
  return legs;
}

/// Clockwise polygons with the origin as a vertex.
inline std::vector<std::vector<oracle::Ambient>> holonomy_polygons() {
  using oracle::phi;
  constexpr double pi = std::numbers::pi;
  return {
      {phi(0.8, 0.0, 0), phi(0.8 * std::sqrt(2.0), -pi / 4, 0), phi(0.8, -pi / 2, 0)},  // square-ish
      {phi(1.2, 0.3, 0), phi(1.0, -0.6, 0)},                                          // triangle
      {phi(0.8, 1.0, 0), phi(1.1, 0.4, 0), phi(1.0, -0.4, 0), phi(0.5, -1.1, 0)},     // pentagon
      {phi(1.3, 0.0, 0), phi(1.4, -0.45, 0), phi(1.0, -0.9, 0)},
  };
}

/// Mixed H²/E rectangles have no holonomy; pure H² loops rotate by their area.
inline CheckResult holonomy() {
  detail::Stopwatch sw;
  double mixed = 0.0;
  for (double d : {0.1, 0.5, 1.0, 2.0}) {
    for (double th : {0.0, 0.9, 2.5}) {
      const TangentVec side = TangentVec::from_polar(d, th, 0.0);
      const std::vector<TangentVec> legs{side, {0, 0, d}, {-side.u, -side.v, 0}, {0, 0, -d}};
      mixed = std::max(mixed, std::abs(holonomy_angle(legs)));
    }
  }
  double worst = 0.0;
  std::string areas;
  bool in_range = true;
  for (const auto& poly : holonomy_polygons()) {
    std::vector<oracle::Ambient> with_origin{oracle::phi(0, 0, 0)};
    with_origin.insert(with_origin.end(), poly.begin(), poly.end());
    const double area = oracle::polygon_area(with_origin);
    in_range = in_range && area >= 0.1 && area <= 1.0;
    const double angle = holonomy_angle(loop_legs(poly));
    worst = std::max(worst, std::abs(angle - area));
    areas += detail::fmt(" %.4f", area);
  }
  const double secs = sw.seconds();
  const bool ok = mixed <= 1e-9 && worst <= 1e-4 && in_range && secs < 1.0;
  return {"holonomy dichotomy", ok,
          "mixed loops |angle| " + detail::fmt("%.2e", mixed) + " (tol 1e-9); H² loops areas" + areas +
              ", |angle − area| " + detail::fmt("%.2e", worst) + " (tol 1e-4); " + detail::fmt("%.3f", secs) + " s",
          secs};
}

/// Apparent width of an object of fixed size shrinks like 1/sinh(d), its height like 1/d.
inline CheckResult anisotropy() {
  detail::Stopwatch sw;
  const RenderSettings rs;
  const CameraPose pose{};
  auto screen = [&](double d, const TangentVec& side) {
    const IsometryH2E g = iso_compose(translation_from_tangent({0, d, 0}), translation_from_tangent(side));
    return screen_position(project_point(pose, iso_apply(g, PointH2E::origin())), rs);
  };
  auto width = [&](double d) { return std::abs(screen(d, {0.15, 0, 0})[0] - screen(d, {-0.15, 0, 0})[0]); };
  auto height = [&](double d) { return std::abs(screen(d, {0, 0, 0.3})[1] - screen(d, {0, 0, -0.3})[1]); };
  double worst_w = 0.0, worst_h = 0.0;
  for (auto [d1, d2] : {std::pair{1.0, 2.0}, {0.5, 1.5}, {1.0, 3.0}, {2.0, 4.0}}) {
    worst_w = std::max(worst_w, std::abs((width(d1) / width(d2)) / (std::sinh(d2) / std::sinh(d1)) - 1.0));
    worst_h = std::max(worst_h, std::abs((height(d1) / height(d2)) / (d2 / d1) - 1.0));
  }
  const bool ok = worst_w < 0.01 && worst_h < 0.01;
  return {"anisotropy law", ok,
          "width vs sinh ratio rel. err " + detail::fmt("%.2e", worst_w) + ", height vs linear ratio rel. err " +
              detail::fmt("%.2e", worst_h) + " (tol 1%)",
          sw.seconds()};
}

/// Ball size, six squares per vertex, and the square's metric constants.
inline CheckResult tiling_combinatorics() {
  detail::Stopwatch sw;
  // Word-enumeration oracle for the depth-2 ball.
  const double L = honeycomb46::kTranslationLength;
  const double dirs[4] = {0.0, std::numbers::pi / 2, std::numbers::pi, 3 * std::numbers::pi / 2};
  std::vector<std::array<double, 3>> centres{{0, 0, 1}};
  std::vector<std::array<double, 9>> level{{1, 0, 0, 0, 1, 0, 0, 0, 1}};
  auto mul = [](const std::array<double, 9>& a, const std::array<double, 9>& b) {
    std::array<double, 9> o{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) o[i * 3 + j] += a[i * 3 + k] * b[k * 3 + j];
    return o;
  };
  for (int len = 1; len <= 2; ++len) {
    std::vector<std::array<double, 9>> next;
    for (const auto& m : level)
      for (double th : dirs) {
        const auto g = mul(m, oracle::boost(L, th));
        next.push_back(g);
        const auto c = oracle::apply3(g, {0, 0, 1});
        bool seen = false;
        for (const auto& e : centres) seen = seen || std::hypot(e[0] - c[0], e[1] - c[1], e[2] - c[2]) < 1e-6;
        if (!seen) centres.push_back(c);
      }
    level = std::move(next);
  }
  const auto ball = build_tiles(2);
  const bool count_ok = ball.size() == centres.size();

  // Vertex incidence: vertices of depth ≤ 2 tiles, counted in the depth-5 ball.
  const auto wide = build_tiles(5);
  const auto sq = oracle::square_vertices(std::acosh(std::sqrt(3.0)));
  std::vector<std::array<double, 3>> clusters;
  std::vector<int> incidence;
  std::vector<std::size_t> inner_clusters;
  for (const Tile& t : wide) {
    for (const auto& v : sq) {
      const Vec3 p = t.g.h * Vec3{v[0], v[1], v[2]};
      std::size_t k = 0;
      for (; k < clusters.size(); ++k)
        if (std::hypot(clusters[k][0] - p[0], clusters[k][1] - p[1], clusters[k][2] - p[2]) < 1e-6 * std::max(1.0, p[2])) break;
      if (k == clusters.size()) {
        clusters.push_back({p[0], p[1], p[2]});
        incidence.push_back(0);
      }
      ++incidence[k];
      if (t.word.size() <= 2) inner_clusters.push_back(k);
    }
  }
  bool six = !inner_clusters.empty();
  for (std::size_t k : inner_clusters) six = six && incidence[k] == 6;

  // Square constants: solve the circumradius for a 60° interior angle, then
  // read the half-edge and in-radius off its vertices.
  const double R = oracle::circumradius_for_angle(std::numbers::pi / 3);
  const auto v = oracle::square_vertices(R);
  const double edge = std::acosh(v[0][2] * v[1][2] - v[0][0] * v[1][0] - v[0][1] * v[1][1]);
  const double mid_w = (v[0][2] + v[3][2]) / std::sqrt(2.0 + 2.0 * (v[0][2] * v[3][2] - v[0][0] * v[3][0] - v[0][1] * v[3][1]));
  const double inradius = std::acosh(mid_w);
  const double half_edge_err = std::abs(edge / 2 - std::acosh(std::sqrt(2.0)));
  const double inradius_err = std::abs(inradius - std::asinh(1.0 / std::sqrt(2.0)));
  const double circum_err = std::abs(R - honeycomb46::kCircumradius);

  // Coincidence: the A generator carries the left edge's vertices onto the right edge's.
  auto coincidence = [&](double shift) {
    double worst = 0.0;
    const auto A = oracle::boost(shift, 0.0);
    for (int k : {1, 2}) {  // vertices with x < 0
      const auto img = oracle::apply3(A, v[k]);
      double best = 1e300;
      for (const auto& u : v) best = std::min(best, std::hypot(img[0] - u[0], img[1] - u[1], img[2] - u[2]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  const double coin = coincidence(honeycomb46::kTranslationLength);
  const double gen_err = max_abs_diff(generator(TilingSpec{}, Gen::A).h, Mat3{oracle::boost(L, 0.0)});
  const double mislabeled = coincidence(2.0 * std::acosh(std::sqrt(2.0)));

  const bool ok = count_ok && six && half_edge_err < 1e-8 && inradius_err < 1e-8 && circum_err < 1e-8 && coin < 1e-8 &&
                  gen_err < 1e-12;
  return {"tiling combinatorics", ok,
          "depth-2 ball " + std::to_string(ball.size()) + " vs oracle " + std::to_string(centres.size()) +
              "; vertices of depth≤2 tiles all 6-valent: " + (six ? "yes" : "no") + "; arccosh(√2) = half-edge (err " +
              detail::fmt("%.1e", half_edge_err) + "), arcsinh(1/√2) = in-radius (err " + detail::fmt("%.1e", inradius_err) +
              "), circumradius arcsinh(√2) (err " + detail::fmt("%.1e", circum_err) + "); generator 2·arcsinh(1/√2) vertex match " +
              detail::fmt("%.1e", coin) + " (tol 1e-8); translation 2·arccosh(√2) would miss by " +
              detail::fmt("%.3f", mislabeled),
          sw.seconds()};
}

/// A straight walk that teleports looks the same across each jump, and a
/// long random walk keeps the camera isometry on O(2,1).
inline CheckResult teleport_invariance() {
  detail::Stopwatch sw;
  const TilingSpec spec{4, 6, 4, 1};
  const auto mesh = build_cube_mesh(spec, 2);
  std::vector<Cell> cells = build_tiling(spec);
  PoseTracker tracker(CameraPose{IsometryH2E::identity(), look_frame(std::numbers::pi / 2, 0.0)});  // facing +u
  CellWord offset;

  const int steps = 100;
  const double step = 10.0 * honeycomb46::kInradius / steps;
  int teleports = 0;
  double worst_jump_invariance = 0.0, max_plain_jump = 0.0, max_teleport_jump = 0.0;
  std::size_t color_mismatches = 0, min_matched = cells.size();
  for (int i = 0; i < steps; ++i) {
    const CameraPose before = tracker.pose();
    const std::vector<Cell> cells_before = cells;
    tracker.move(RoomDelta{{0, 0, step}, 1.0}, tracker.pose().frame);
    const CameraPose moved = tracker.pose();
    const int jumps = teleport(tracker, spec, offset);
    if (jumps > 0) {
      teleports += jumps;
      recolor(cells, offset, spec.hue_step);
      const auto cmp = compare_views(moved, cells_before, tracker.pose(), cells, mesh, IsometryH2E::identity());
      worst_jump_invariance = std::max(worst_jump_invariance, cmp.max_vertex_shift);
      color_mismatches += cmp.color_mismatches;
      min_matched = std::min(min_matched, cmp.matched);
    }
    // Frame-to-frame continuity, following cells through any teleport.
    const IsometryH2E t = iso_compose(tracker.pose().loc, moved.loc.inverse());
    const IsometryH2E motion = iso_compose(tracker.pose().loc.inverse(), iso_compose(t, before.loc));
    const auto cont = compare_views(before, cells_before, tracker.pose(), cells, mesh, motion);
    (jumps > 0 ? max_teleport_jump : max_plain_jump) = std::max(jumps > 0 ? max_teleport_jump : max_plain_jump,
                                                                 cont.max_vertex_shift);
  }

  // 10⁶ random small moves through the real motion + teleport path.
  PoseTracker walker;
  CellWord w_offset;
  std::mt19937_64 rng(oracle::seed());
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int i = 0; i < 1'000'000; ++i) {
    walker.move(RoomDelta{{u(rng), u(rng), u(rng)}, 0.4}, walker.pose().frame);
    teleport(walker, spec, w_offset);
  }
  const double defect = walker.pose().loc.defect();

  const bool word_ok = offset.str() == std::string(static_cast<std::size_t>(teleports), 'A');
  const bool ok = teleports >= 5 && word_ok && worst_jump_invariance <= 1e-6 && color_mismatches == 0 &&
                  min_matched >= cells.size() / 2 && max_teleport_jump < 10.0 * max_plain_jump && defect < 1e-6;
  return {"teleport view-invariance", ok,
          std::to_string(teleports) + " teleports (need ≥ 5), offset word " + offset.str() + "; pre/post vertex shift " +
              detail::fmt("%.2e", worst_jump_invariance) + " (tol 1e-6), colour mismatches " +
              std::to_string(color_mismatches) + ", min matched cells " + std::to_string(min_matched) + "/" +
              std::to_string(cells.size()) + "; teleport-frame jump " + detail::fmt("%.4f", max_teleport_jump) +
              " vs plain " + detail::fmt("%.4f", max_plain_jump) + "; defect after 1e6 steps " +
              detail::fmt("%.2e", defect) + " (tol 1e-6)",
          sw.seconds()};
}

/// Eyes looking at a far marker turn inward by arcsin(tanh(s/2)), not 0.
inline CheckResult parallax() {
  detail::Stopwatch sw;
  const double s = 0.1;
  const auto [left, right] = eye_poses(CameraPose{}, StereoConfig{s});
  auto inward = [&](double d) {
    const PointH2E marker = exp_map({0.0, d, 0.0});
    return 0.5 * (bearing(left, marker) - bearing(right, marker));
  };
  const double a5 = inward(5), a10 = inward(10), a20 = inward(20), a05 = inward(0.5);
  const double limit = std::asin(std::tanh(s / 2));
  double oracle_err = 0.0;
  for (double d : {0.5, 5.0, 10.0, 20.0}) oracle_err = std::max(oracle_err, std::abs(inward(d) - oracle::parallax_angle(s, d)));
  const bool ok = std::abs(a20 - limit) < 1e-4 && a20 > 0.0 && a05 > a5 && a5 >= a10 && a10 >= a20 && oracle_err < 1e-9;
  return {"parallax limit", ok,
          "inward angle d=0.5,5,10,20: " + detail::fmt("%.6f", a05) + ", " + detail::fmt("%.6f", a5) + ", " +
              detail::fmt("%.6f", a10) + ", " + detail::fmt("%.6f", a20) + "; limit arcsin(tanh(s/2)) = " +
              detail::fmt("%.6f", limit) + ", |a20 − limit| " + detail::fmt("%.1e", std::abs(a20 - limit)) +
              " (tol 1e-4); right-triangle oracle err " + detail::fmt("%.1e", oracle_err),
          sw.seconds()};
}

inline RenderSettings golden_settings() {
  RenderSettings s;
  s.width = 256;
  s.height = 256;
  return s;
}

inline std::string golden_name(View v) { return std::string("view_") + view_name(v) + ".ppm"; }

/// Four depth-7 views are non-empty and byte-identical to the stored goldens.
inline CheckResult figures(const std::filesystem::path& golden_dir) {
  detail::Stopwatch sw;
  TilingSpec spec;
  spec.depth = 7;
  bool ok = true;
  std::string detail;
  const RenderSettings rs = golden_settings();
  for (View v : {View::H2, View::E, View::Diag, View::Diag2}) {
    const FrameImage img = render_view(v, spec, rs);
    const std::array<std::uint8_t, 3> bg{h2xe::detail::to_byte(rs.background.r), h2xe::detail::to_byte(rs.background.g),
                                         h2xe::detail::to_byte(rs.background.b)};
    std::size_t lit = 0;
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        if (img.pixel(x, y) != bg) ++lit;
    bool same = false;
    try {
      const FrameImage gold = load_ppm((golden_dir / golden_name(v)).string());
      same = gold.width == img.width && gold.height == img.height && gold.rgb == img.rgb;
    } catch (const std::exception&) {
      same = false;
    }
    ok = ok && lit > 100 && same;
    detail += std::string(view_name(v)) + ": " + std::to_string(lit) + " px drawn, golden " + (same ? "match" : "MISMATCH") + "; ";
  }
  return {"figure reproduction", ok, detail, sw.seconds()};
}

/// Median per-frame service latency at depth 5 and depth-7 build time.
inline CheckResult performance() {
  detail::Stopwatch sw;
  const ServiceConfig cfg;
  auto scene = Scene::build(cfg.spec, cfg.subdivisions);
  Session session(scene, cfg.room_scale);
  std::vector<double> ms;
  for (int i = 0; i < 60; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const GeometryMsg g = session.handle_motion(MotionMsg{{0.0, 0.0, 0.05}, look_frame(0.01 * i, 0.0), i});
    const auto t1 = std::chrono::steady_clock::now();
    if (g.segments.empty()) return {"performance gate", false, "no geometry produced", sw.seconds()};
    if (i >= 10) ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  const double median = ms[ms.size() / 2];

  TilingSpec deep;
  deep.depth = 7;
  const auto t0 = std::chrono::steady_clock::now();
  const auto cells = build_tiling(deep);
  const double build_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const bool ok = median < cfg.frame_budget_ms && build_s < 2.0;
  return {"performance gate", ok,
          "median handle_motion " + detail::fmt("%.2f", median) + " ms (limit 16) over " +
              std::to_string(scene->cells.size()) + " cells; build_tiling depth 7 (" + std::to_string(cells.size()) +
              " cells) " + detail::fmt("%.3f", build_s) + " s (limit 2)",
          sw.seconds()};
}

inline std::vector<CheckResult> run_all(const std::filesystem::path& golden_dir) {
  return {geodesic_exp(), metric_christoffel(), holonomy(), anisotropy(), tiling_combinatorics(),
          teleport_invariance(), parallax(), figures(golden_dir), performance()};
}

}  // namespace h2xe::verify
