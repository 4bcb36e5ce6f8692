#include <cmath>
#include <cstdlib>
#include <numbers>

#include "catch_amalgamated.hpp"

#include "h2xe/oracles.hpp"

using namespace h2xe;
using Catch::Approx;
using std::numbers::pi;

TEST_CASE("hyperboloid parametrization") {
  for (double rho : {0.0, 0.3, 2.0})
    for (double theta : {0.0, 1.0, -2.5}) {
      const auto p = oracle::phi(rho, theta, 0.7);
      CHECK(oracle::inner(p, p) - p[2] * p[2] == Approx(-1.0).margin(1e-9));
      CHECK(p[2] == 0.7);
      CHECK(oracle::h2_distance(oracle::phi(0, 0, 0), p) == Approx(rho).margin(1e-7));
    }
}

TEST_CASE("finite difference metric of the chart") {
  for (double rho : {0.2, 1.0, 3.0}) {
    const auto g = oracle::fd_metric(rho, 0.4);
    CHECK(g[0][0] == Approx(1.0).margin(1e-8));
    CHECK(g[1][1] == Approx(std::sinh(rho) * std::sinh(rho)).epsilon(1e-8));
    CHECK(g[2][2] == Approx(1.0).margin(1e-8));
    CHECK(std::abs(g[0][1]) < 1e-8);
    CHECK(std::abs(g[0][2]) < 1e-8);
  }
}

TEST_CASE("general christoffel formula on a known metric") {
  // Flat plane in polar coordinates: Γρθθ = −ρ, Γθρθ = 1/ρ.
  const auto G = oracle::christoffel_general([](double r) { return r * r; }, 2.0);
  CHECK(G[0][1][1] == Approx(-2.0).epsilon(1e-8));
  CHECK(G[1][0][1] == Approx(0.5).epsilon(1e-8));
  CHECK(G[1][1][0] == Approx(0.5).epsilon(1e-8));
  CHECK(G[2][0][0] == 0.0);
  CHECK(G[0][0][0] == 0.0);
}

TEST_CASE("triangle areas") {
  // Equilateral triangle of side a: cos α = cosh a / (1 + cosh a).
  for (double a : {0.1, 1.0, 3.0}) {
    const double alpha = std::acos(std::cosh(a) / (1.0 + std::cosh(a)));
    CHECK(oracle::triangle_area(a, a, a) == Approx(pi - 3 * alpha).epsilon(1e-9));
  }
  // Small triangles are nearly euclidean.
  const double s = 1e-3;
  CHECK(oracle::triangle_area(s, s, s) == Approx(std::sqrt(3.0) / 4 * s * s).epsilon(1e-3));
  // Degenerate triangle has no area.
  CHECK(oracle::triangle_area(1.0, 0.4, 0.6) == Approx(0.0).margin(1e-6));
  // Area stays below π.
  CHECK(oracle::triangle_area(20.0, 20.0, 20.0) < pi);
  CHECK(oracle::triangle_area(20.0, 20.0, 20.0) == Approx(pi).margin(1e-3));
}

TEST_CASE("regular squares") {
  const double R = std::asinh(std::sqrt(2.0));
  CHECK(oracle::square_interior_angle(R) == Approx(pi / 3).epsilon(1e-12));
  CHECK(oracle::square_interior_angle(1e-4) == Approx(pi / 2).epsilon(1e-6));
  CHECK(oracle::circumradius_for_angle(pi / 3) == Approx(R).epsilon(1e-12));

  std::vector<oracle::Ambient> v;
  for (const auto& p : oracle::square_vertices(R)) v.push_back({p[0], p[1], 0.0, p[2]});
  CHECK(oracle::polygon_area(v) == Approx(2 * pi - 4 * pi / 3).epsilon(1e-9));
}

TEST_CASE("boosts") {
  const auto b = oracle::boost(0.8, 0.3);
  const auto o = oracle::apply3(b, {0, 0, 1});
  CHECK(o[0] == Approx(std::sinh(0.8) * std::cos(0.3)));
  CHECK(o[1] == Approx(std::sinh(0.8) * std::sin(0.3)));
  CHECK(o[2] == Approx(std::cosh(0.8)));

  const std::array<double, 3> p{0.3, -0.2, std::sqrt(1 + 0.09 + 0.04)};
  const auto q = oracle::apply3(b, p);
  CHECK(q[0] * q[0] + q[1] * q[1] - q[2] * q[2] == Approx(-1.0).epsilon(1e-12));

  const auto ab = oracle::apply3(oracle::boost(0.5, 1.1), oracle::apply3(oracle::boost(0.7, 1.1), {0, 0, 1}));
  const auto c = oracle::apply3(oracle::boost(1.2, 1.1), {0, 0, 1});
  for (int i = 0; i < 3; ++i) CHECK(ab[i] == Approx(c[i]).epsilon(1e-12));
}

TEST_CASE("parallax angle limits") {
  CHECK(oracle::parallax_angle(0.0, 1.0) == 0.0);
  CHECK(oracle::parallax_angle(0.1, 50.0) == Approx(std::atan(std::sinh(0.05))).epsilon(1e-12));
  CHECK(oracle::parallax_angle(1e-4, 0.01) == Approx(std::atan(0.5e-4 / 0.01)).epsilon(1e-4));
  CHECK(oracle::parallax_angle(0.1, 1.0) > oracle::parallax_angle(0.1, 2.0));
}

TEST_CASE("seed comes from the environment") {
  const char* old = std::getenv("H2XE_SEED");
  const std::string saved = old ? old : "";
  ::setenv("H2XE_SEED", "123", 1);
  CHECK(oracle::seed() == 123);
  ::unsetenv("H2XE_SEED");
  CHECK(oracle::seed() == 4646);
  if (old) ::setenv("H2XE_SEED", saved.c_str(), 1);
}
