#pragma once

// Numeric foundation for H²×E: the hyperboloid×line model in Minkowski
// space E^{3,1}, its polar parametrisation, metric, Christoffel symbols and
// the closed-form geodesics through the origin.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

namespace h2xe {

/// Ambient coordinates in E^{3,1}; w is the timelike axis, z the E factor.
struct Vec4M {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double w = 0.0;

  friend constexpr bool operator==(const Vec4M&, const Vec4M&) = default;
};

/// Inner product of signature (+,+,+,−).
constexpr double minkowski_inner(const Vec4M& a, const Vec4M& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z - a.w * b.w;
}

/// A point of the model {x² + y² = w² − 1, w > 0}.
struct PointH2E {
  Vec4M v{0.0, 0.0, 0.0, 1.0};

  static constexpr PointH2E origin() { return PointH2E{}; }

  /// x² + y² − w² + 1; zero on the model.
  constexpr double model_defect() const { return v.x * v.x + v.y * v.y - v.w * v.w + 1.0; }

  friend constexpr bool operator==(const PointH2E&, const PointH2E&) = default;
};

/// Polar chart (ρ, θ, z): ρ ≥ 0 hyperbolic radius, θ ∈ [0, 2π), z height.
struct ParamCoords {
  double rho = 0.0;
  double theta = 0.0;
  double z = 0.0;
};

/// Wrap an angle into [0, 2π).
inline double normalize_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= two_pi) t = 0.0;
  return t;
}

/// Vector in the tangent space at the origin. (u, v) span the H² plane and
/// z is the E direction. The polar view is ρ₀ = |(u, v)|, θ₀ = atan2(v, u).
struct TangentVec {
  double u = 0.0;
  double v = 0.0;
  double z = 0.0;

  static TangentVec from_polar(double rho0, double theta0, double z0) {
    return {rho0 * std::cos(theta0), rho0 * std::sin(theta0), z0};
  }

  double radial() const { return std::hypot(u, v); }
  /// θ₀ in [0, 2π); 0 on the vertical axis.
  double angle() const { return (u == 0.0 && v == 0.0) ? 0.0 : normalize_angle(std::atan2(v, u)); }
  double length() const { return std::sqrt(u * u + v * v + z * z); }

  friend constexpr bool operator==(const TangentVec&, const TangentVec&) = default;
};

/// φ(ρ, θ, z) = (sinh ρ cos θ, sinh ρ sin θ, z, cosh ρ).
inline PointH2E param_to_point(const ParamCoords& c) {
  const double s = std::sinh(c.rho);
  return PointH2E{{s * std::cos(c.theta), s * std::sin(c.theta), c.z, std::cosh(c.rho)}};
}

/// Inverse chart. θ is 0 on the axis.
inline ParamCoords point_to_param(const PointH2E& p) {
  const double r = std::hypot(p.v.x, p.v.y);
  const double theta = r == 0.0 ? 0.0 : normalize_angle(std::atan2(p.v.y, p.v.x));
  return {std::asinh(r), theta, p.v.z};
}

/// Diagonal metric g = ⟨∂ᵢφ, ∂ⱼφ⟩ in the (ρ, θ, z) chart.
struct MetricTensor {
  double g_rho_rho = 1.0;
  double g_theta_theta = 0.0;
  double g_z_z = 1.0;
};

inline MetricTensor metric_components(double rho) {
  const double s = std::sinh(rho);
  return {1.0, s * s, 1.0};
}

/// The two independent non-zero Christoffel symbols; Γ^θ_θρ = Γ^θ_ρθ and
/// every symbol carrying a z index vanishes.
struct ChristoffelTable {
  double rho_theta_theta = 0.0;  // Γ^ρ_θθ
  double theta_rho_theta = 0.0;  // Γ^θ_ρθ
};

/// Throws std::domain_error at ρ ≤ 0 where coth ρ is singular.
inline ChristoffelTable christoffel(double rho) {
  if (!(rho > 0.0)) throw std::domain_error("christoffel: rho must be positive (polar chart is singular at the axis)");
  return {-std::cosh(rho) * std::sinh(rho), std::cosh(rho) / std::sinh(rho)};
}

/// Unit-time geodesic through the origin with initial velocity dir:
/// γ(t) = (sinh(ρ₀t) cos θ₀, sinh(ρ₀t) sin θ₀, z₀t, cosh(ρ₀t)).
inline PointH2E geodesic_point(const TangentVec& dir, double t) {
  const double rho0 = dir.radial();
  const double z = dir.z * t;
  if (rho0 == 0.0) return PointH2E{{0.0, 0.0, z, 1.0}};
  const double s = std::sinh(rho0 * t) / rho0;
  return PointH2E{{s * dir.u, s * dir.v, z, std::cosh(rho0 * t)}};
}

/// Largest |γ̈^λ + Γ^λ_μν γ̇^μ γ̇^ν| over the samples for an arbitrary curve,
/// with derivatives from central differences of step `h` on the polar chart.
/// `curve` maps a parameter to a PointH2E.
template <class Curve>
double geodesic_equation_residual(Curve&& curve, std::span<const double> t_samples, double h = 1e-4) {
  double worst = 0.0;
  for (double t : t_samples) {
    const ParamCoords m = point_to_param(curve(t - h));
    const ParamCoords c = point_to_param(curve(t));
    const ParamCoords p = point_to_param(curve(t + h));
    // θ may straddle the 0/2π cut; unwrap relative to the centre sample.
    auto unwrap = [&](double th) {
      double d = th - c.theta;
      if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
      if (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
      return c.theta + d;
    };
    const double tm = unwrap(m.theta);
    const double tp = unwrap(p.theta);

    const double rho_d = (p.rho - m.rho) / (2 * h);
    const double rho_dd = (p.rho - 2 * c.rho + m.rho) / (h * h);
    const double th_d = (tp - tm) / (2 * h);
    const double th_dd = (tp - 2 * c.theta + tm) / (h * h);
    const double z_dd = (p.z - 2 * c.z + m.z) / (h * h);

    const ChristoffelTable g = christoffel(c.rho);
    const double r_rho = rho_dd + g.rho_theta_theta * th_d * th_d;
    const double r_theta = th_dd + 2.0 * g.theta_rho_theta * rho_d * th_d;
    worst = std::max({worst, std::abs(r_rho), std::abs(r_theta), std::abs(z_dd)});
  }
  return worst;
}

/// Residual of the geodesic equation along geodesic_point(dir, ·).
inline double geodesic_residual(const TangentVec& dir, std::span<const double> t_samples) {
  return geodesic_equation_residual([&](double t) { return geodesic_point(dir, t); }, t_samples);
}

}  // namespace h2xe
