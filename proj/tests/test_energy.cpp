#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <ssg/energy.hpp>
#include <ssg/parser.hpp>

#include "oracles.hpp"

using namespace ssg;

namespace {

const Poly2 X = Poly2::x(), Y = Poly2::y();

Gasket tail_only() { return Gasket(ParamSeq::with_tail({}, 0.1, 0.5)); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Generation-s part of the limit cable form for affine u, v, summed over all prefixes
// through the matrix recursion X <- sum_j T_j X T_j^T, innermost level first.
double affine_cable_generation(const std::vector<double> &prefix, double c, double r, int s, const Vec2 &gu,
                               const Vec2 &gv) {
  const double e = oracle::eps(prefix, c, r, s);
  Mat2 x = Mat2::zero();
  for (int slot = 1; slot <= 3; ++slot) {
    static const int ends[3][4] = {{1, 1, 2, 0}, {1, 2, 3, 0}, {2, 2, 3, 1}};
    const auto &q = ends[slot - 1];
    const Vec2 d = oracle::apply(q[2], e, oracle::kCorners[q[3]]) - oracle::apply(q[0], e, oracle::kCorners[q[1]]);
    x += Mat2::outer(d, d);
  }
  for (int k = s - 1; k >= 1; --k) {
    const auto t = oracle::linear(oracle::eps(prefix, c, r, k));
    Mat2 y = Mat2::zero();
    for (const auto &m : t) y += m * x * m.transposed();
    x = y;
  }
  double lam = 1.0;
  for (int k = 1; k < s; ++k) lam *= 0.6 * std::pow(oracle::eps(prefix, c, r, k), 2);
  double logp = 0.0;
  for (int i = s; i <= 10000; ++i) logp += std::log(oracle::eps(prefix, c, r, i));
  const double w = (1.0 / 3.0) / (lam * std::exp(logp) * (1.0 - e));
  return w * dot(gu, x * gv);
}

} // namespace

TEST(SegmentPairing, Values) {
  const Segment unit{{0.0, 0.0}, {1.0, 0.0}};
  const auto id = AffineMap2::identity();
  EXPECT_NEAR(segment_pairing(X, X, id, unit), 1.0, 1e-15);
  EXPECT_NEAR(segment_pairing(X, Y, id, unit), 0.0, 1e-15);
  const Poly2 x2 = parse("x^2");
  EXPECT_NEAR(segment_pairing(x2, x2, id, unit), 4.0 / 3.0, 1e-15);
}

TEST(SegmentPairing, MatchesExactPolynomialIntegral) {
  std::mt19937_64 rng(21);
  for (int n = 0; n < 20; ++n) {
    const Poly2 u = oracle::random_poly(rng, 4), v = oracle::random_poly(rng, 4);
    const Segment s{{0.2, -0.1}, {0.6, 0.4}};
    EXPECT_NEAR(segment_pairing(u, v, AffineMap2::identity(), s), oracle::exact_pairing(u, v, s.p, s.q), 1e-13);
  }
}

TEST(Energy1, BaseLevel) {
  const Gasket g(ParamSeq::constant(0.5));
  EXPECT_NEAR(energy1(g, 0, X, X), 0.5, 1e-15);
  EXPECT_NEAR(energy1(g, 0, Y, Y), 0.5, 1e-15);
  EXPECT_NEAR(energy1(g, 0, X, Y), 0.0, 1e-15);
  EXPECT_EQ(energy_total(g, 0, X, X).e2, 0.0);
}

// sum_j T_j T_j^T = lambda Id, so the triangle part of an affine energy does not move.
TEST(Energy, AffineTrianglePartIsLevelIndependent) {
  for (const auto &s : oracle::regimes()) {
    const Gasket g(s);
    double prev = 0.0;
    for (int l = 0; l <= 6; ++l) {
      EXPECT_NEAR(energy1(g, l, X, X), 0.5, 1e-12);
      EXPECT_NEAR(energy1(g, l, X, Y), 0.0, 1e-12);
      const double t = energy_total(g, l, X, X).total;
      EXPECT_GE(t, prev);
      prev = t;
    }
  }
}

TEST(Energy, ConstantRegimeCablePartAtDepthOne) {
  // b (1 - eps)^2 (3/2) / (eps (1 - eps)) at eps = 1/2
  const Gasket g(ParamSeq::constant(0.5));
  EXPECT_NEAR(energy2(g, 1, X, X), 0.5, 1e-14);
}

TEST(Energy, SymmetricBilinearPositive) {
  std::mt19937_64 rng(17);
  for (const auto &s : oracle::regimes()) {
    const Gasket g(s);
    for (int n = 0; n < 5; ++n) {
      const Poly2 u = oracle::random_poly(rng, 3), v = oracle::random_poly(rng, 3), w = oracle::random_poly(rng, 3);
      for (int l = 0; l <= 4; ++l) {
        const double uv = energy_total(g, l, u, v).total;
        EXPECT_LT(rel(uv, energy_total(g, l, v, u).total), 1e-13);
        const double lin = energy_total(g, l, u + 2.0 * w, v).total;
        EXPECT_LT(rel(lin, uv + 2.0 * energy_total(g, l, w, v).total), 1e-12);
        const double uu = energy_total(g, l, u, u).total;
        EXPECT_GE(uu, 0.0);
        const double vv = energy_total(g, l, v, v).total;
        EXPECT_LE(uv * uv, uu * vv * (1 + 1e-12));
      }
    }
  }
}

TEST(Energy, ConstantsHaveZeroEnergy) {
  const Gasket g = tail_only();
  EXPECT_EQ(energy_total(g, 3, Poly2::constant(2.0), X).total, 0.0);
}

TEST(Energy, QuadratureOrderIsExact) {
  std::mt19937_64 rng(19);
  const Gasket g = tail_only();
  const QuadratureRule q16(16);
  const Poly2 u = oracle::random_poly(rng, 7), v = oracle::random_poly(rng, 7);
  for (int l = 0; l <= 3; ++l) {
    EXPECT_LT(rel(energy_total(g, l, u, v).total, energy_total(g, l, u, v, q16).total), 1e-12);
  }
}

TEST(CableEnergy, Scaling) {
  for (double e : {0.2, 0.5, 0.9}) {
    const Gasket g(ParamSeq::constant(e));
    EXPECT_NEAR(cable_energy(g, 1, X, X), 0.5 * (1.0 - e), 1e-14);
    EXPECT_NEAR(cable_energy(g, 1, Y, Y), 0.5 * (1.0 - e), 1e-14);
  }
  EXPECT_THROW(cable_energy(tail_only(), 0, X, X), DomainError);
}

TEST(Recurrence, HoldsForRandomPolynomials) {
  std::mt19937_64 rng(23);
  for (const auto &s : oracle::regimes()) {
    const Gasket g(s);
    for (int n = 0; n < 3; ++n) {
      const Poly2 u = oracle::random_poly(rng, 4), v = oracle::random_poly(rng, 4);
      for (int l = 1; l <= 4; ++l) {
        const IdentityCheck c = recurrence_residual(g, l, u, v);
        EXPECT_LE(c.residual, 1e-11 * std::max(1.0, std::abs(c.lhs))) << "l=" << l;
      }
    }
  }
}

TEST(SelfSimilarity, WithinTruncationBound) {
  std::mt19937_64 rng(29);
  for (const auto &s : {ParamSeq::with_tail({}, 0.1, 0.5), ParamSeq::with_tail({0.9, 0.8, 0.7}, 0.05, 0.5)}) {
    const Gasket g(s);
    for (int n = 0; n < 3; ++n) {
      const Poly2 u = oracle::random_poly(rng, 3), v = oracle::random_poly(rng, 3);
      for (int d = 1; d <= 5; ++d) {
        const IdentityCheck c = selfsimilar_residual(g, u, v, d);
        EXPECT_LE(c.residual, c.bound + 1e-11 * std::max(1.0, std::abs(c.lhs)));
      }
    }
  }
  EXPECT_THROW(selfsimilar_residual(Gasket(ParamSeq::constant(0.5)), X, X, 2), DomainError);
}

TEST(LimitCableForm, MonotoneAndBounded) {
  const Gasket g = tail_only();
  const Poly2 u = parse("x^2 + x*y - y");
  double prev = 0.0;
  for (int s = 1; s <= 8; ++s) {
    const TruncatedValue t = energy2_limit(g, u, u, s);
    EXPECT_GE(t.value, prev);
    EXPECT_GE(t.tail_bound, 0.0);
    prev = t.value;
  }
  EXPECT_THROW(energy2_limit(Gasket(ParamSeq::constant(0.5)), X, X, 3), DomainError);
  EXPECT_THROW(energy2_limit(g, X, X, 0), DomainError);
}

TEST(LimitCableForm, AffineAgainstMatrixRecursion) {
  struct Case {
    std::vector<double> prefix;
    double c, r;
  };
  for (const Case &k : {Case{{}, 0.1, 0.5}, Case{{0.9, 0.8, 0.7}, 0.05, 0.5}}) {
    const Gasket g(ParamSeq::with_tail(k.prefix, k.c, k.r));
    const Vec2 gu{0.3, -1.1}, gv{0.7, 0.4};
    const Poly2 u = affine(0.2, gu.x, gu.y), v = affine(-1.0, gv.x, gv.y);
    double acc = 0.0;
    for (int s = 1; s <= 10; ++s) {
      acc += affine_cable_generation(k.prefix, k.c, k.r, s, gu, gv);
      EXPECT_LT(rel(energy2_limit(g, u, v, s).value, acc), 1e-11) << "s=" << s;
    }
    double deep = acc;
    for (int s = 11; s <= 20; ++s) deep += affine_cable_generation(k.prefix, k.c, k.r, s, gu, gv);
    const TruncatedValue t = energy2_limit(g, u, v, 10);
    EXPECT_LE(std::abs(deep - t.value), t.tail_bound);
  }
}
