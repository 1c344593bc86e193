// Independent reference computations for the tests. Nothing here calls into the
// library's map, product or energy code; only the value types are shared.
#ifndef SSG_TESTS_ORACLES_HPP
#define SSG_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <ssg/ssg.hpp>

namespace oracle {

using ssg::Mat2;
using ssg::Vec2;

inline const double kS3 = std::sqrt(3.0);

/// eps_i from the prefix or the tail rule, straight from the definition.
inline double eps(const std::vector<double> &prefix, double c, double r, int i) {
  if (i <= static_cast<int>(prefix.size())) return prefix[static_cast<std::size_t>(i - 1)];
  return std::exp(-c * std::pow(r, i));
}

/// Linear parts from the closed forms of the symmetric conjugates of diag(alpha, beta).
inline std::array<Mat2, 3> linear(double alpha, double beta) {
  const double d = kS3 * (alpha - beta) / 4.0;
  const double p = (alpha + 3.0 * beta) / 4.0, q = (3.0 * alpha + beta) / 4.0;
  return {Mat2{alpha, 0.0, 0.0, beta}, Mat2{p, d, d, q}, Mat2{p, -d, -d, q}};
}
inline std::array<Mat2, 3> linear(double e) { return linear(0.6 * e, 0.2 * e); }

inline const std::array<Vec2, 3> kCorners{Vec2{0.0, 0.0}, Vec2{kS3 / 2.0, 0.5}, Vec2{kS3 / 2.0, -0.5}};

/// F_j x = T_j (x - P_j) + P_j with P_j the corner fixed by F_j.
inline Vec2 apply(int j, double e, const Vec2 &x) {
  const auto t = linear(e);
  const Vec2 &p = kCorners[static_cast<std::size_t>(j - 1)];
  return t[static_cast<std::size_t>(j - 1)] * (x - p) + p;
}

/// F_{w_1} o ... o F_{w_l} applied to x, innermost first.
inline Vec2 apply_word(const std::vector<int> &w, const std::vector<double> &e, const Vec2 &x) {
  Vec2 y = x;
  for (int k = static_cast<int>(w.size()) - 1; k >= 0; --k)
    y = apply(w[static_cast<std::size_t>(k)], e[static_cast<std::size_t>(k)], y);
  return y;
}

inline Mat2 linear_word(const std::vector<int> &w, const std::vector<double> &e) {
  Mat2 m = Mat2::identity();
  for (std::size_t k = 0; k < w.size(); ++k) m = m * linear(e[k])[static_cast<std::size_t>(w[k] - 1)];
  return m;
}

/// kappa([w]) = ||DF_w||_HS^2 / (2 prod lambda) with lambda_k = (3/5) eps_k^2.
inline double kappa(const std::vector<int> &w, const std::vector<double> &e) {
  const Mat2 m = linear_word(w, e);
  double lam = 1.0;
  for (std::size_t k = 0; k < w.size(); ++k) lam *= 0.6 * e[k] * e[k];
  return (m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d) / (2.0 * lam);
}

/// Random polynomial with coefficients in [-1, 1] and total degree <= deg.
inline ssg::Poly2 random_poly(std::mt19937_64 &rng, int deg) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  ssg::Poly2 p;
  for (int m = 0; m <= deg; ++m)
    for (int n = 0; m + n <= deg; ++n) p += ssg::Poly2::monomial(m, n, coef(rng));
  return p;
}

inline ssg::Poly2 random_affine(std::mt19937_64 &rng) { return random_poly(rng, 1); }

/// A random multiple of the corner-vanishing cubic, total degree <= 3 + deg.
inline ssg::Poly2 random_admissible(std::mt19937_64 &rng, int deg) {
  return ssg::vanishing_at_ABC(random_poly(rng, deg));
}

/// Evaluate sum c x^m y^n by direct powers.
inline double eval(const ssg::Poly2 &p, const Vec2 &x) {
  double acc = 0.0;
  for (const auto &[e, c] : p.terms()) acc += c * std::pow(x.x, e.first) * std::pow(x.y, e.second);
  return acc;
}

/// Exact int_0^1 (u o gamma)'(v o gamma)' dt on the segment a -> b via Poly1 algebra.
inline double exact_pairing(const ssg::Poly2 &u, const ssg::Poly2 &v, const Vec2 &a, const Vec2 &b) {
  const ssg::Segment seg{a, b};
  const auto du = ssg::compose_with_segment(u, ssg::AffineMap2::identity(), seg).derivative();
  const auto dv = ssg::compose_with_segment(v, ssg::AffineMap2::identity(), seg).derivative();
  return (du * dv).integral01();
}

/// The three test regimes used throughout.
inline std::vector<ssg::ParamSeq> regimes() {
  return {ssg::ParamSeq::constant(0.5), ssg::ParamSeq::with_tail({0.9, 0.8, 0.7}, 0.05, 0.5),
          ssg::ParamSeq::with_tail({}, 0.1, 0.5)};
}

} // namespace oracle

#endif // SSG_TESTS_ORACLES_HPP
