#ifndef SSG_LINALG_HPP
#define SSG_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <utility>

namespace ssg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(const Vec2 &o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(const Vec2 &o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2 &operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2 &a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2 &a) { return std::hypot(a.x, a.y); }
constexpr double norm2(const Vec2 &a) { return dot(a, a); }
inline bool is_finite(const Vec2 &a) { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Row-major 2x2 matrix ((a, b), (c, d)).
struct Mat2 {
  double a = 0.0, b = 0.0;
  double c = 0.0, d = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {}; }
  static constexpr Mat2 diag(double p, double q) { return {p, 0.0, 0.0, q}; }
  /// v v^T
  static constexpr Mat2 outer(const Vec2 &v, const Vec2 &w) {
    return {v.x * w.x, v.x * w.y, v.y * w.x, v.y * w.y};
  }

  constexpr Mat2 transposed() const { return {a, c, b, d}; }
  constexpr double trace() const { return a + d; }
  constexpr double det() const { return a * d - b * c; }

  constexpr Mat2 &operator+=(const Mat2 &o) {
    a += o.a;
    b += o.b;
    c += o.c;
    d += o.d;
    return *this;
  }
  constexpr Mat2 &operator-=(const Mat2 &o) {
    a -= o.a;
    b -= o.b;
    c -= o.c;
    d -= o.d;
    return *this;
  }
  constexpr Mat2 &operator*=(double s) {
    a *= s;
    b *= s;
    c *= s;
    d *= s;
    return *this;
  }
  friend constexpr Mat2 operator+(Mat2 x, const Mat2 &y) { return x += y; }
  friend constexpr Mat2 operator-(Mat2 x, const Mat2 &y) { return x -= y; }
  friend constexpr Mat2 operator*(double s, Mat2 x) { return x *= s; }
  friend constexpr Mat2 operator*(Mat2 x, double s) { return x *= s; }
  friend constexpr Mat2 operator*(const Mat2 &x, const Mat2 &y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
  friend constexpr Vec2 operator*(const Mat2 &m, const Vec2 &v) {
    return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
  }
  friend constexpr bool operator==(const Mat2 &, const Mat2 &) = default;

  double max_abs() const {
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  }
  /// |b - c| <= tol * scale, with scale the largest entry (at least 1).
  bool is_symmetric(double tol = 1e-14) const {
    return std::abs(b - c) <= tol * std::max(1.0, max_abs());
  }
};

/// Hilbert-Schmidt inner product tr(A B^T).
constexpr double hs_inner(const Mat2 &x, const Mat2 &y) {
  return x.a * y.a + x.b * y.b + x.c * y.c + x.d * y.d;
}
inline double hs_norm(const Mat2 &m) { return std::sqrt(hs_inner(m, m)); }

/// Largest singular value.
inline double op_norm(const Mat2 &m) {
  const double s = hs_inner(m, m);
  const double dt = m.det();
  const double disc = std::sqrt(std::max(0.0, s * s / 4.0 - dt * dt));
  return std::sqrt(s / 2.0 + disc);
}

/// Eigenvalues (ascending) of the symmetric part of m.
inline std::pair<double, double> sym_eigenvalues(const Mat2 &m) {
  const double off = 0.5 * (m.b + m.c);
  const double mean = 0.5 * (m.a + m.d);
  const double r = std::hypot(0.5 * (m.a - m.d), off);
  return {mean - r, mean + r};
}

/// Orthogonal projection onto span(v); v must be nonzero.
inline Mat2 projection_onto(const Vec2 &v) {
  const double n2 = norm2(v);
  return (1.0 / n2) * Mat2::outer(v, v);
}

} // namespace ssg

#endif // SSG_LINALG_HPP
