#ifndef SSG_POLY_HPP
#define SSG_POLY_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "linalg.hpp"

namespace ssg {

/// Univariate polynomial in t, coefficients in ascending order.
class Poly1 {
public:
  Poly1() = default;
  explicit Poly1(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly1 constant(double v) { return Poly1({v}); }
  static Poly1 linear(double c0, double c1) { return Poly1({c0, c1}); }

  const std::vector<double> &coeffs() const { return c_; }
  int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  double operator()(double t) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  Poly1 derivative() const {
    std::vector<double> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(static_cast<double>(k) * c_[k]);
    return Poly1(std::move(d));
  }

  /// Exact integral over [0,1].
  double integral01() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < c_.size(); ++k) acc += c_[k] / static_cast<double>(k + 1);
    return acc;
  }

  friend Poly1 operator+(const Poly1 &p, const Poly1 &q) {
    std::vector<double> r(std::max(p.c_.size(), q.c_.size()), 0.0);
    for (std::size_t k = 0; k < p.c_.size(); ++k) r[k] += p.c_[k];
    for (std::size_t k = 0; k < q.c_.size(); ++k) r[k] += q.c_[k];
    return Poly1(std::move(r));
  }
  friend Poly1 operator*(const Poly1 &p, const Poly1 &q) {
    if (p.c_.empty() || q.c_.empty()) return {};
    std::vector<double> r(p.c_.size() + q.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.c_.size(); ++i)
      for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
    return Poly1(std::move(r));
  }
  friend Poly1 operator*(double s, const Poly1 &p) {
    std::vector<double> r = p.c_;
    for (auto &v : r) v *= s;
    return Poly1(std::move(r));
  }

private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }
  std::vector<double> c_;
};

/// Value, gradient and (symmetric) Hessian of a scalar field at a point.
struct FieldEval {
  double value = 0.0;
  Vec2 gradient{};
  Mat2 hessian{};
};

/// Sparse bivariate polynomial sum c_{mn} x^m y^n. Zero coefficients are never stored.
class Poly2 {
public:
  using Exponents = std::pair<int, int>;
  using TermMap = std::map<Exponents, double>;

  Poly2() = default;
  explicit Poly2(TermMap terms) : terms_(std::move(terms)) { prune(); }

  static Poly2 constant(double v) { return monomial(0, 0, v); }
  static Poly2 x() { return monomial(1, 0, 1.0); }
  static Poly2 y() { return monomial(0, 1, 1.0); }
  static Poly2 monomial(int m, int n, double c) {
    if (m < 0 || n < 0) throw DomainError("negative exponent");
    TermMap t;
    if (c != 0.0) t[{m, n}] = c;
    return Poly2(std::move(t));
  }

  const TermMap &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  double coeff(int m, int n) const {
    auto it = terms_.find({m, n});
    return it == terms_.end() ? 0.0 : it->second;
  }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto &[e, c] : terms_) d = std::max(d, e.first + e.second);
    return d;
  }
  int degree_x() const {
    int d = 0;
    for (const auto &[e, c] : terms_) d = std::max(d, e.first);
    return d;
  }
  int degree_y() const {
    int d = 0;
    for (const auto &[e, c] : terms_) d = std::max(d, e.second);
    return d;
  }

  double operator()(const Vec2 &p) const {
    if (terms_.empty()) return 0.0;
    const int dx = degree_x(), dy = degree_y();
    double xp[64], yp[64];
    powers(p.x, dx, xp);
    powers(p.y, dy, yp);
    double acc = 0.0;
    for (const auto &[e, c] : terms_) acc += c * xp[e.first] * yp[e.second];
    return acc;
  }

  Poly2 dx() const {
    TermMap t;
    for (const auto &[e, c] : terms_)
      if (e.first > 0) t[{e.first - 1, e.second}] += c * e.first;
    return Poly2(std::move(t));
  }
  Poly2 dy() const {
    TermMap t;
    for (const auto &[e, c] : terms_)
      if (e.second > 0) t[{e.first, e.second - 1}] += c * e.second;
    return Poly2(std::move(t));
  }

  Poly2 &operator+=(const Poly2 &o) {
    for (const auto &[e, c] : o.terms_) terms_[e] += c;
    prune();
    return *this;
  }
  Poly2 &operator-=(const Poly2 &o) {
    for (const auto &[e, c] : o.terms_) terms_[e] -= c;
    prune();
    return *this;
  }
  Poly2 &operator*=(double s) {
    for (auto &[e, c] : terms_) c *= s;
    prune();
    return *this;
  }
  friend Poly2 operator+(Poly2 p, const Poly2 &q) { return p += q; }
  friend Poly2 operator-(Poly2 p, const Poly2 &q) { return p -= q; }
  friend Poly2 operator-(Poly2 p) { return p *= -1.0; }
  friend Poly2 operator*(double s, Poly2 p) { return p *= s; }
  friend Poly2 operator*(const Poly2 &p, const Poly2 &q) {
    TermMap t;
    for (const auto &[e1, c1] : p.terms_)
      for (const auto &[e2, c2] : q.terms_) t[{e1.first + e2.first, e1.second + e2.second}] += c1 * c2;
    return Poly2(std::move(t));
  }
  friend bool operator==(const Poly2 &, const Poly2 &) = default;

  Poly2 pow(int n) const {
    if (n < 0) throw DomainError("negative exponent");
    Poly2 result = constant(1.0), base = *this;
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return result;
  }

  /// p o f for an affine map f.
  Poly2 compose(const AffineMap2 &f) const {
    const Poly2 fx = monomial(1, 0, f.linear.a) + monomial(0, 1, f.linear.b) + constant(f.offset.x);
    const Poly2 fy = monomial(1, 0, f.linear.c) + monomial(0, 1, f.linear.d) + constant(f.offset.y);
    std::vector<Poly2> xp{constant(1.0)}, yp{constant(1.0)};
    for (int k = 1; k <= degree_x(); ++k) xp.push_back(xp.back() * fx);
    for (int k = 1; k <= degree_y(); ++k) yp.push_back(yp.back() * fy);
    Poly2 out;
    for (const auto &[e, c] : terms_) out += c * (xp[e.first] * yp[e.second]);
    return out;
  }

  /// sum |c_mn| X^m Y^n, an upper bound for sup |p| on [-X,X] x [-Y,Y].
  double abs_bound(double xmax, double ymax) const {
    double acc = 0.0;
    for (const auto &[e, c] : terms_) acc += std::abs(c) * std::pow(xmax, e.first) * std::pow(ymax, e.second);
    return acc;
  }

private:
  static void powers(double v, int n, double *out) {
    if (n >= 64) throw DomainError("polynomial degree too large");
    out[0] = 1.0;
    for (int k = 1; k <= n; ++k) out[k] = out[k - 1] * v;
  }
  void prune() { std::erase_if(terms_, [](const auto &kv) { return kv.second == 0.0; }); }

  TermMap terms_;
};

/// A polynomial with its first and second partial derivatives precomputed.
class PolyJet {
public:
  explicit PolyJet(Poly2 p)
      : f_(std::move(p)), fx_(f_.dx()), fy_(f_.dy()), fxx_(fx_.dx()), fxy_(fx_.dy()), fyy_(fy_.dy()) {}

  const Poly2 &poly() const { return f_; }
  double value(const Vec2 &p) const { return f_(p); }
  Vec2 gradient(const Vec2 &p) const { return {fx_(p), fy_(p)}; }
  Mat2 hessian(const Vec2 &p) const {
    const double off = fxy_(p);
    return {fxx_(p), off, off, fyy_(p)};
  }
  FieldEval at(const Vec2 &p) const { return {value(p), gradient(p), hessian(p)}; }

  /// Upper bound of |grad p| on the bounding box of the triangle ABC.
  double gradient_bound() const {
    const double gx = fx_.abs_bound(kSqrt3 / 2.0, 0.5);
    const double gy = fy_.abs_bound(kSqrt3 / 2.0, 0.5);
    return std::hypot(gx, gy);
  }
  /// Upper bound of max |second partial| on the bounding box of ABC.
  double hessian_bound() const {
    return std::max({fxx_.abs_bound(kSqrt3 / 2.0, 0.5), fxy_.abs_bound(kSqrt3 / 2.0, 0.5),
                     fyy_.abs_bound(kSqrt3 / 2.0, 0.5)});
  }

private:
  Poly2 f_, fx_, fy_, fxx_, fxy_, fyy_;
};

/// Value, gradient and Hessian by symbolic differentiation.
inline FieldEval eval_full(const Poly2 &p, const Vec2 &at) { return PolyJet(p).at(at); }

/// t -> p(f(gamma(t))) as an exact univariate polynomial.
inline Poly1 compose_with_segment(const Poly2 &p, const AffineMap2 &f, const Segment &seg) {
  const Segment img = seg.mapped(f);
  const Vec2 v = img.velocity();
  const Poly1 xt = Poly1::linear(img.p.x, v.x);
  const Poly1 yt = Poly1::linear(img.p.y, v.y);
  std::vector<Poly1> xp{Poly1::constant(1.0)}, yp{Poly1::constant(1.0)};
  for (int k = 1; k <= p.degree_x(); ++k) xp.push_back(xp.back() * xt);
  for (int k = 1; k <= p.degree_y(); ++k) yp.push_back(yp.back() * yt);
  Poly1 out;
  for (const auto &[e, c] : p.terms()) out = out + c * (xp[e.first] * yp[e.second]);
  return out;
}

/// a0 + ax x + ay y
inline Poly2 affine(double a0, double ax, double ay) {
  return Poly2::constant(a0) + Poly2::monomial(1, 0, ax) + Poly2::monomial(0, 1, ay);
}

/// lambda_A lambda_B lambda_C: product of the barycentric coordinates of ABC, a
/// cubic vanishing at the three corners.
inline Poly2 barycentric_cubic() {
  const double s = 1.0 / kSqrt3;
  const Poly2 la = affine(1.0, -2.0 * s, 0.0);
  const Poly2 lb = affine(0.0, s, 1.0);
  const Poly2 lc = affine(0.0, s, -1.0);
  return la * lb * lc;
}

inline Poly2 vanishing_at_ABC(const Poly2 &q) { return q * barycentric_cubic(); }

/// True when |p| at A, B and C is below tol relative to the coefficient scale.
inline bool vanishes_at_corners(const Poly2 &p, double tol = 1e-12) {
  const double scale = std::max(1.0, p.abs_bound(1.0, 1.0));
  for (const auto &v : base_vertices())
    if (std::abs(p(v)) > tol * scale) return false;
  return true;
}

} // namespace ssg

#endif // SSG_POLY_HPP
