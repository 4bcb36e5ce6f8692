#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace h2xe {

/// Plain 3-vector used for room displacements and camera-frame coordinates.
using Vec3 = std::array<double, 3>;

/// Row-major 3x3 matrix with the handful of operations the geometry needs.
struct Mat3 {
  std::array<double, 9> a{};

  static constexpr Mat3 identity() {
    return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}};
  }

  constexpr double& operator()(std::size_t r, std::size_t c) { return a[r * 3 + c]; }
  constexpr double operator()(std::size_t r, std::size_t c) const { return a[r * 3 + c]; }

  constexpr Mat3 transposed() const {
    return Mat3{{a[0], a[3], a[6], a[1], a[4], a[7], a[2], a[5], a[8]}};
  }

  constexpr Vec3 column(std::size_t c) const { return {a[c], a[3 + c], a[6 + c]}; }
  constexpr void set_column(std::size_t c, const Vec3& v) {
    a[c] = v[0];
    a[3 + c] = v[1];
    a[6 + c] = v[2];
  }

  constexpr double determinant() const {
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
  }

  friend constexpr Mat3 operator*(const Mat3& l, const Mat3& r) {
    Mat3 out;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        out(i, j) = l(i, 0) * r(0, j) + l(i, 1) * r(1, j) + l(i, 2) * r(2, j);
    return out;
  }

  friend constexpr Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m.a[0] * v[0] + m.a[1] * v[1] + m.a[2] * v[2],
            m.a[3] * v[0] + m.a[4] * v[1] + m.a[5] * v[2],
            m.a[6] * v[0] + m.a[7] * v[1] + m.a[8] * v[2]};
  }

  friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

inline double max_abs_diff(const Mat3& l, const Mat3& r) {
  double m = 0.0;
  for (std::size_t i = 0; i < 9; ++i) m = std::max(m, std::abs(l.a[i] - r.a[i]));
  return m;
}

inline double dot(const Vec3& l, const Vec3& r) { return l[0] * r[0] + l[1] * r[1] + l[2] * r[2]; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 cross(const Vec3& l, const Vec3& r) {
  return {l[1] * r[2] - l[2] * r[1], l[2] * r[0] - l[0] * r[2], l[0] * r[1] - l[1] * r[0]};
}
inline Vec3 scaled(const Vec3& v, double s) { return {v[0] * s, v[1] * s, v[2] * s}; }

/// Largest entry of |MᵀM − I|.
inline double orthogonality_defect(const Mat3& m) {
  return max_abs_diff(m.transposed() * m, Mat3::identity());
}

/// Euclidean Gram-Schmidt on the columns; keeps the first column's direction.
inline Mat3 orthonormalized(const Mat3& m) {
  Vec3 c0 = m.column(0);
  c0 = scaled(c0, 1.0 / norm(c0));
  Vec3 c1 = m.column(1);
  const double p10 = dot(c1, c0);
  c1 = {c1[0] - p10 * c0[0], c1[1] - p10 * c0[1], c1[2] - p10 * c0[2]};
  c1 = scaled(c1, 1.0 / norm(c1));
  Vec3 c2 = m.column(2);
  const double p20 = dot(c2, c0);
  const double p21 = dot(c2, c1);
  c2 = {c2[0] - p20 * c0[0] - p21 * c1[0], c2[1] - p20 * c0[1] - p21 * c1[1],
        c2[2] - p20 * c0[2] - p21 * c1[2]};
  c2 = scaled(c2, 1.0 / norm(c2));
  Mat3 out;
  out.set_column(0, c0);
  out.set_column(1, c1);
  out.set_column(2, c2);
  return out;
}

}  // namespace h2xe
