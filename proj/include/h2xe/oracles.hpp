#pragma once

// Independent reference computations used by the test suites and by
// `h2xe verify`. Nothing here calls the code it is used to check: the
// chart, metric, Christoffel symbols, areas and boosts are recomputed from
// first principles (finite differences, hyperbolic trigonometry).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace h2xe::oracle {

using Ambient = std::array<double, 4>;  // x, y, z, w

inline Ambient phi(double rho, double theta, double z) {
  return {std::sinh(rho) * std::cos(theta), std::sinh(rho) * std::sin(theta), z, std::cosh(rho)};
}

inline double inner(const Ambient& a, const Ambient& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3]; }

/// Five-point central difference of a scalar function.
inline double d5(const std::function<double(double)>& f, double x, double h = 1e-4) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

/// Five-point central difference of φ along coordinate i ∈ {ρ, θ, z}.
inline Ambient dphi(int i, double rho, double theta, double z, double h = 1e-4) {
  auto at = [&](double s) {
    return phi(rho + (i == 0 ? s : 0.0), theta + (i == 1 ? s : 0.0), z + (i == 2 ? s : 0.0));
  };
  const Ambient p2 = at(2 * h), p1 = at(h), m1 = at(-h), m2 = at(-2 * h);
  Ambient out{};
  for (int k = 0; k < 4; ++k) out[k] = (-p2[k] + 8 * p1[k] - 8 * m1[k] + m2[k]) / (12 * h);
  return out;
}

/// g_ij = ⟨∂ᵢφ, ∂ⱼφ⟩ by finite differences.
inline std::array<std::array<double, 3>, 3> fd_metric(double rho, double theta, double z = 0.0) {
  std::array<Ambient, 3> d{dphi(0, rho, theta, z), dphi(1, rho, theta, z), dphi(2, rho, theta, z)};
  std::array<std::array<double, 3>, 3> g{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g[i][j] = inner(d[i], d[j]);
  return g;
}

/// Christoffel symbols of a diagonal metric diag(1, gθθ(ρ), 1) from the
/// general formula Γ^λ_μν = ½ g^λσ (∂ν g_σμ + ∂μ g_σν − ∂σ g_μν) with the
/// ρ-derivative taken numerically. Returns all 27 as Γ[λ][μ][ν].
inline std::array<std::array<std::array<double, 3>, 3>, 3> christoffel_general(
    const std::function<double(double)>& g_theta_theta, double rho) {
  auto g = [&](int i, int j, double r) -> double {
    if (i != j) return 0.0;
    return i == 1 ? g_theta_theta(r) : 1.0;
  };
  auto dg = [&](int i, int j, int along) -> double {
    if (along != 0) return 0.0;  // metric depends on ρ only
    return d5([&](double r) { return g(i, j, r); }, rho);
  };
  std::array<std::array<std::array<double, 3>, 3>, 3> G{};
  for (int l = 0; l < 3; ++l)
    for (int m = 0; m < 3; ++m)
      for (int n = 0; n < 3; ++n) {
        double s = 0.0;
        for (int sg = 0; sg < 3; ++sg) {
          if (sg != l) continue;  // g⁻¹ diagonal
          s += (1.0 / g(l, l, rho)) * (dg(sg, m, n) + dg(sg, n, m) - dg(m, n, sg));
        }
        G[l][m][n] = 0.5 * s;
      }
  return G;
}

/// Hyperbolic distance between points of the hyperboloid (z ignored).
inline double h2_distance(const Ambient& p, const Ambient& q) {
  const double c = p[3] * q[3] - p[0] * q[0] - p[1] * q[1];
  return std::acosh(std::max(1.0, c));
}

/// Area of a hyperbolic triangle (K = −1) from its side lengths via the
/// law of cosines: area = π − α − β − γ.
inline double triangle_area(double a, double b, double c) {
  auto angle = [](double opp, double s1, double s2) {
    const double v = (std::cosh(s1) * std::cosh(s2) - std::cosh(opp)) / (std::sinh(s1) * std::sinh(s2));
    return std::acos(std::clamp(v, -1.0, 1.0));
  };
  return std::numbers::pi - angle(a, b, c) - angle(b, c, a) - angle(c, a, b);
}

/// Area of a convex geodesic polygon, fan-triangulated from vertex 0.
inline double polygon_area(const std::vector<Ambient>& v) {
  double area = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    area += triangle_area(h2_distance(v[i], v[i + 1]), h2_distance(v[0], v[i + 1]), h2_distance(v[0], v[i]));
  }
  return area;
}

/// Hyperbolic translation by L along direction θ acting on (x, y, w),
/// written out as R(θ) · boost_x(L) · R(−θ).
inline std::array<double, 9> boost(double L, double theta) {
  const double c = std::cos(theta), s = std::sin(theta), ch = std::cosh(L), sh = std::sinh(L);
  const std::array<double, 9> R{c, -s, 0, s, c, 0, 0, 0, 1};
  const std::array<double, 9> X{ch, 0, sh, 0, 1, 0, sh, 0, ch};
  const std::array<double, 9> Rt{c, s, 0, -s, c, 0, 0, 0, 1};
  auto mul = [](const std::array<double, 9>& a, const std::array<double, 9>& b) {
    std::array<double, 9> o{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) o[i * 3 + j] += a[i * 3 + k] * b[k * 3 + j];
    return o;
  };
  return mul(mul(R, X), Rt);
}

inline std::array<double, 3> apply3(const std::array<double, 9>& m, const std::array<double, 3>& v) {
  return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2], m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
          m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
}

/// Vertices (x, y, w) of a regular square centred at the origin with
/// circumradius R, at angles 45° + k·90°.
inline std::array<std::array<double, 3>, 4> square_vertices(double R) {
  std::array<std::array<double, 3>, 4> v{};
  for (int k = 0; k < 4; ++k) {
    const double a = std::numbers::pi / 4 + k * std::numbers::pi / 2;
    v[k] = {std::sinh(R) * std::cos(a), std::sinh(R) * std::sin(a), std::cosh(R)};
  }
  return v;
}

/// Interior angle of that square, from the law of cosines in the triangle
/// (vertex, neighbour vertex, opposite-neighbour vertex).
inline double square_interior_angle(double R) {
  const auto v = square_vertices(R);
  auto dist = [](const std::array<double, 3>& p, const std::array<double, 3>& q) {
    return std::acosh(std::max(1.0, p[2] * q[2] - p[0] * q[0] - p[1] * q[1]));
  };
  const double a = dist(v[0], v[1]), b = dist(v[0], v[3]), diag = dist(v[1], v[3]);
  return std::acos(std::clamp((std::cosh(a) * std::cosh(b) - std::cosh(diag)) / (std::sinh(a) * std::sinh(b)), -1.0, 1.0));
}

/// Circumradius of the regular square whose interior angle is `angle`,
/// by bisection on square_interior_angle (decreasing in R).
inline double circumradius_for_angle(double angle) {
  double lo = 1e-6, hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (square_interior_angle(mid) > angle ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Inward eye angle toward a marker straight ahead at distance d from the
/// midpoint of two eyes separated by s: the right triangle with legs s/2
/// and d gives tan α = sinh(s/2)/tanh(d).
inline double parallax_angle(double s, double d) { return std::atan(std::sinh(s / 2.0) / std::tanh(d)); }

/// Seed for randomized checks; H2XE_SEED overrides.
inline std::uint64_t seed() {
  if (const char* s = std::getenv("H2XE_SEED")) return std::strtoull(s, nullptr, 10);
  return 4646;
}

}  // namespace h2xe::oracle
