#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include <ssg/harmonicity.hpp>
#include <ssg/parser.hpp>

#include "oracles.hpp"

using namespace ssg;

namespace {

const Poly2 X = Poly2::x(), Y = Poly2::y();

double threshold(const Gasket &g) { return kHarmonicTolerance * g.constants().a; }

// Brute-force min over a coarse angle grid, from the oracle matrices.
double grid_gamma(const std::array<Mat2, 3> &m, int steps) {
  const double pi = std::acos(-1.0);
  double best = 1e300;
  for (int i = 0; i < steps; ++i) {
    for (int j = 0; j < steps; ++j) {
      const Vec2 c{std::cos(pi * i / steps), std::sin(pi * i / steps)};
      const Vec2 e{std::cos(pi * j / steps), std::sin(pi * j / steps)};
      double mx = 0.0;
      for (const auto &mi : m) mx = std::max(mx, std::abs(e.x * (mi.a * c.x + mi.b * c.y) + e.y * (mi.c * c.x + mi.d * c.y)));
      best = std::min(best, mx);
    }
  }
  return best;
}

} // namespace

TEST(Harmonic, AllRegimesBelowThreshold) {
  for (const auto &s : oracle::regimes()) {
    const Gasket g(s);
    for (int l = 1; l <= 6; ++l) EXPECT_LE(harmonic_residual(g, l), threshold(g)) << s.describe() << " l=" << l;
  }
}

TEST(Harmonic, DepthEight) {
  const Gasket g(ParamSeq::with_tail({}, 0.1, 0.5));
  EXPECT_LE(harmonic_residual(g, 8), threshold(g));
}

TEST(Harmonic, FirstCableVertex) {
  const Gasket g(ParamSeq::constant(0.5));
  for (const auto &st : vertex_stars(g, 1)) {
    if (st.label.word == Word{1} && st.label.corner == Corner::B) {
      EXPECT_NEAR(st.vertex.x, oracle::apply(1, 0.5, kVertexB).x, 1e-15);
      EXPECT_LE(norm(boundary_vector(st)), 1e-14);
      EXPECT_EQ(st.cable_count(), 1);
      return;
    }
  }
  FAIL() << "vertex F_1(B) missing";
}

TEST(Harmonic, WrongAnisotropyFails) {
  for (double ani : {2.0, 2.5, 2.9, 3.1, 4.0}) {
    const Gasket g(ParamSeq::constant(0.5), {}, ani);
    EXPECT_GT(harmonic_residual(g, 1), 1e-3 * g.constants().a) << ani;
  }
  const Gasket g(ParamSeq::constant(0.5), {}, 2.0);
  const Gasket h(ParamSeq::constant(0.5), FormConstants::harmonic(2.0 / 3.0), 2.0);
  EXPECT_NEAR(harmonic_residual(h, 2), 2.0 * harmonic_residual(g, 2), 1e-12);
}

TEST(Harmonic, UnequalConstantsFail) {
  const Gasket g(ParamSeq::constant(0.5), FormConstants{1.0 / 3.0, 0.5});
  EXPECT_GT(harmonic_residual(g, 1), 1e-3 * g.constants().a);
}

TEST(Harmonic, VertexClassification) {
  const Gasket g(ParamSeq::with_tail({0.9, 0.8, 0.7}, 0.05, 0.5));
  for (int l = 1; l <= 4; ++l) {
    const auto stars = vertex_stars(g, l);
    EXPECT_EQ(static_cast<long>(stars.size()), 3L * static_cast<long>(std::pow(3, l)));
    int corners = 0;
    std::set<std::pair<double, double>> points;
    for (const auto &st : stars) {
      points.insert({st.vertex.x, st.vertex.y});
      if (st.is_corner()) {
        ++corners;
        EXPECT_EQ(st.cable_count(), 0);
        EXPECT_NEAR(norm(st.vertex - corner_point(st.label.corner)), 0.0, 1e-15);
      } else {
        EXPECT_EQ(st.cable_count(), 1);
      }
      EXPECT_EQ(st.triangle_edge_count(), 2);
    }
    EXPECT_EQ(corners, 3);
    EXPECT_EQ(points.size(), stars.size());
    EXPECT_EQ(harmonic_report(g, l).interior_vertices, stars.size() - 3);
  }
  EXPECT_THROW(harmonic_report(g, 0), DomainError);
}

// For affine u, v the form collapses to corner terms once every interior
// boundary vector vanishes.
TEST(Harmonic, AffineEnergyFromCornerVectors) {
  std::mt19937_64 rng(31);
  for (const auto &s : oracle::regimes()) {
    const Gasket g(s);
    const Poly2 u = oracle::random_affine(rng), v = oracle::random_affine(rng);
    const Vec2 gu{u.coeff(1, 0), u.coeff(0, 1)};
    for (int l = 1; l <= 8; ++l) {
      const HarmonicReport r = harmonic_report(g, l);
      double rhs = 0.0;
      for (int k = 0; k < 3; ++k) rhs -= v(base_vertices()[k]) * dot(gu, r.corner_vectors[k]);
      const double lhs = energy_total(g, l, u, v).total;
      EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(lhs))) << "l=" << l;
    }
  }
}

TEST(WeakLaplacian, AffineHasZeroDensity) {
  const Gasket g(ParamSeq::with_tail({}, 0.1, 0.5));
  for (const auto &d : weak_laplacian_H1(g, 3, affine(1.0, 2.0, -3.0))) EXPECT_TRUE(d.density.is_zero());
}

TEST(WeakLaplacian, IntegrationByParts) {
  std::mt19937_64 rng(37);
  for (const auto &s : oracle::regimes()) {
    const Gasket g(s);
    for (int n = 0; n < 20; ++n) {
      const Poly2 u = oracle::random_poly(rng, 3), v = oracle::random_admissible(rng, 1);
      const int l = 1 + n % 3;
      const IdentityCheck c = weak_ibp_check(g, l, u, v);
      EXPECT_LE(c.residual, 1e-10 * std::max(1.0, std::abs(c.lhs)));
    }
  }
}

TEST(WeakLaplacian, Rejects) {
  const Gasket g(ParamSeq::constant(0.5));
  EXPECT_THROW(weak_ibp_check(g, 2, X, X), DomainError);
  const Gasket bad(ParamSeq::constant(0.5), {}, 2.0);
  EXPECT_THROW(weak_laplacian_H1(bad, 2, X), DomainError);
}

TEST(NonDegeneracy, UnitEps) {
  const NdReport r = nd_report(linear_parts(triple(1.0)));
  EXPECT_NEAR(r.gamma, 0.15, 1e-9);
  EXPECT_LE(r.lower_bound, r.gamma);
  EXPECT_GT(r.lower_bound, 0.14);
}

TEST(NonDegeneracy, AgainstCoarseGrid) {
  for (double e : {0.3, 0.6, 1.0}) {
    const auto m = oracle::linear(e);
    const double coarse = grid_gamma(m, 180);
    const double gamma = nd_gamma(e);
    EXPECT_LE(gamma, coarse + 1e-15);
    EXPECT_GE(gamma, coarse - 0.6 * e * std::acos(-1.0) / 180);
  }
}

TEST(NonDegeneracy, LinearInEps) {
  for (double e : {0.1, 0.25, 0.5, 0.75}) EXPECT_NEAR(nd_gamma(e) / e, 0.15, 1e-9);
}

TEST(NonDegeneracy, RankOneTripleDegenerates) {
  const Mat2 p = Mat2::outer({1.0, 0.0}, {1.0, 0.0});
  EXPECT_LT(nd_gamma(std::array<Mat2, 3>{p, 0.5 * p, 2.0 * p}), 1e-12);
}
