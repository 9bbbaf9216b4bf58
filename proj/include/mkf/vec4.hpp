#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace mkf {

/// Point (or direction) in R^4.
struct Vec4 {
  std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

  Vec4() = default;
  Vec4(double a, double b, double d, double e) : c{a, b, d, e} {}

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  Vec4& operator+=(const Vec4& o) {
    for (int i = 0; i < 4; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec4& operator-=(const Vec4& o) {
    for (int i = 0; i < 4; ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec4& operator*=(double s) {
    for (int i = 0; i < 4; ++i) c[i] *= s;
    return *this;
  }
};

inline Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
inline Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
inline Vec4 operator*(double s, Vec4 a) { return a *= s; }
inline Vec4 operator*(Vec4 a, double s) { return a *= s; }
inline Vec4 operator/(Vec4 a, double s) { return a *= (1.0 / s); }
inline Vec4 operator-(const Vec4& a) { return {-a[0], -a[1], -a[2], -a[3]}; }

inline bool operator==(const Vec4& a, const Vec4& b) { return a.c == b.c; }

inline double dot(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline double norm_sq(const Vec4& a) { return dot(a, a); }
inline double norm(const Vec4& a) { return std::sqrt(norm_sq(a)); }
inline double distance(const Vec4& a, const Vec4& b) { return norm(a - b); }

inline Vec4 normalized(const Vec4& a) {
  double n = norm(a);
  return a / n;
}

inline Vec4 basis4(int i) {
  Vec4 e;
  e[static_cast<std::size_t>(i)] = 1.0;
  return e;
}

inline bool all_finite(const Vec4& a) {
  return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]) &&
         std::isfinite(a[3]);
}

/// Component of a orthogonal to the unit vector u.
inline Vec4 reject(const Vec4& a, const Vec4& u) { return a - dot(a, u) * u; }

inline double clamp_unit(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }

/// Angle in [0, pi] between unit vectors.
inline double unit_angle(const Vec4& a, const Vec4& b) {
  return std::acos(clamp_unit(dot(a, b)));
}

}  // namespace mkf
