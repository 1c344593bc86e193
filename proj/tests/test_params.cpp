#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include <ssg/params.hpp>

#include "oracles.hpp"

using ssg::ParamSeq;

TEST(ParamSeq, DirectReads) {
  const auto s = ParamSeq::with_tail({0.5}, 0.1, 0.5);
  EXPECT_EQ(s.eps(1), 0.5);
  const auto t = ParamSeq::with_tail({0.9, 0.8}, 0.1, 0.5);
  EXPECT_EQ(t.eps(2), 0.8);
}

TEST(ParamSeq, TailValue) {
  const auto s = ParamSeq::with_tail({}, 0.1, 0.5);
  EXPECT_NEAR(s.eps(1), 0.951229424500714, 1e-15);
}

TEST(ParamSeq, RejectsBadInput) {
  const auto s = ParamSeq::with_tail({}, 0.1, 0.5);
  EXPECT_THROW(s.eps(0), ssg::DomainError);
  EXPECT_THROW(ParamSeq::with_tail({0.5, 1.0}, 0.1, 0.5), ssg::DomainError);
  EXPECT_THROW(ParamSeq::with_tail({0.0}, 0.1, 0.5), ssg::DomainError);
  EXPECT_THROW(ParamSeq::with_tail({}, 0.0, 0.5), ssg::DomainError);
  EXPECT_THROW(ParamSeq::with_tail({}, 0.1, 1.0), ssg::DomainError);
  EXPECT_THROW(ParamSeq::constant(1.0), ssg::DomainError);
}

TEST(ParamSeq, EveryEntryInOpenInterval) {
  for (const auto &s : oracle::regimes()) {
    for (int i = 1; i <= 200; ++i) {
      EXPECT_GT(s.eps(i), 0.0);
      EXPECT_LE(s.eps(i), 1.0); // rounds to 1 deep in the tail
      EXPECT_GT(s.one_minus_eps(i), 0.0);
    }
  }
}

TEST(ParamSeq, LamTilde) {
  const auto s = ParamSeq::with_tail({0.5}, 0.1, 0.5);
  EXPECT_EQ(s.lam_tilde(0), 1.0);
  EXPECT_NEAR(s.lam_tilde(1), 0.15, 1e-16);
  EXPECT_THROW(s.lam_tilde(-1), ssg::DomainError);
}

TEST(ParamSeq, LamTildeRecurrence) {
  for (const auto &s : oracle::regimes()) {
    for (int l = 0; l < 40; ++l) {
      const double e = s.eps(l + 1);
      EXPECT_NEAR(s.lam_tilde(l + 1), s.lam_tilde(l) * 0.6 * e * e, 1e-14 * s.lam_tilde(l + 1));
    }
  }
}

TEST(ParamSeq, LamTildeDeepDoesNotUnderflowToGarbage) {
  const auto s = ParamSeq::constant(0.5);
  const double lt = s.lam_tilde(64);
  EXPECT_GT(lt, 0.0);
  EXPECT_NEAR(std::log(lt), 64.0 * std::log(0.15), 1e-10);
}

TEST(ParamSeq, EpsTildeFinite) {
  const auto s = ParamSeq::with_tail({0.5}, 0.1, 0.5);
  EXPECT_EQ(s.eps_tilde(1, 1), 0.5);
  EXPECT_THROW(s.eps_tilde(3, 2), ssg::DomainError);
  EXPECT_THROW(s.eps_tilde(0, 2), ssg::DomainError);
  for (const auto &r : oracle::regimes()) {
    for (int sidx = 1; sidx <= 5; ++sidx) {
      for (int l = sidx; l < 30; ++l) {
        EXPECT_LE(r.eps_tilde(sidx, l + 1), r.eps_tilde(sidx, l));
        EXPECT_NEAR(r.eps_tilde(sidx, l + 1), r.eps_tilde(sidx, l) * r.eps(l + 1), 1e-15);
      }
    }
  }
}

TEST(ParamSeq, EpsTildeInfClosedForm) {
  const auto s = ParamSeq::with_tail({}, 0.1, 0.5);
  EXPECT_NEAR(s.eps_tilde_inf(1), 0.9048374180359595, 1e-15);
}

TEST(ParamSeq, EpsTildeInfAgainstBruteForce) {
  const std::vector<double> prefix{0.9, 0.8, 0.7};
  const auto s = ParamSeq::with_tail(prefix, 0.05, 0.5);
  for (int first = 1; first <= 6; ++first) {
    double logp = 0.0;
    for (int i = first; i <= 10000; ++i) logp += std::log(oracle::eps(prefix, 0.05, 0.5, i));
    EXPECT_NEAR(s.eps_tilde_inf(first), std::exp(logp), 1e-12);
  }
}

TEST(ParamSeq, InfiniteProductBounds) {
  for (const auto &s : {ParamSeq::with_tail({0.9, 0.8, 0.7}, 0.05, 0.5), ParamSeq::with_tail({}, 0.1, 0.5),
                        ParamSeq::with_tail({}, 3.0, 0.9)}) {
    EXPECT_TRUE(std::isfinite(s.log_eps_tilde_inf(1)));
    const double delta = s.product_lower_bound();
    EXPECT_GT(delta, 0.0);
    for (int i = 1; i <= 50; ++i) {
      EXPECT_LE(delta, s.eps_tilde_inf(i) * (1 + 1e-15));
      EXPECT_LT(s.eps_tilde_inf(i), 1.0);
    }
  }
}

TEST(ParamSeq, ConstantSequenceIsFiniteDepthOnly) {
  const auto s = ParamSeq::constant(0.5);
  EXPECT_FALSE(s.has_positive_product());
  EXPECT_NO_THROW(s.eps_tilde(1, 10));
  EXPECT_THROW(s.eps_tilde_inf(1), ssg::DomainError);
  EXPECT_THROW(s.tail_defect_sum(3), ssg::DomainError);
}

TEST(ParamSeq, ShiftConsistency) {
  for (const auto &s : oracle::regimes()) {
    const auto t = s.shift();
    for (int i = 1; i <= 64; ++i) EXPECT_NEAR(t.eps(i), s.eps(i + 1), 1e-15);
    if (s.has_positive_product()) {
      EXPECT_NEAR(t.eps_tilde_inf(1), s.eps_tilde_inf(2), 1e-15);
    }
  }
}

TEST(ParamSeq, OneMinusEpsIsAccurateNearOne) {
  const auto s = ParamSeq::with_tail({}, 0.1, 0.5);
  const double x = 0.1 * std::pow(0.5, 40);
  EXPECT_NEAR(s.one_minus_eps(40) / x, 1.0, 1e-10);
}

TEST(ParamSeq, TailDefectSumBoundsBruteForce) {
  const std::vector<double> prefix{0.9, 0.8, 0.7};
  const auto s = ParamSeq::with_tail(prefix, 0.05, 0.5);
  for (int smax = 0; smax <= 6; ++smax) {
    double sum = 0.0;
    for (int i = smax + 1; i <= 2000; ++i) sum += 1.0 - oracle::eps(prefix, 0.05, 0.5, i);
    EXPECT_GE(s.tail_defect_sum(smax), sum - 1e-15);
    EXPECT_LE(s.tail_defect_sum(smax), 1.1 * sum + 1e-15);
  }
}

TEST(ParamSeq, StrictHalfBoundFlag) {
  EXPECT_TRUE(ParamSeq::constant(0.5).satisfies_strict_half_bound(10));
  EXPECT_FALSE(ParamSeq::with_tail({0.9}, 0.1, 0.5).satisfies_strict_half_bound(1));
  // The tail tends to 1, so deep levels exceed 5/6.
  EXPECT_FALSE(ParamSeq::with_tail({}, 0.1, 0.5).satisfies_strict_half_bound(3));
}

TEST(FormConstants, Defaults) {
  const ssg::FormConstants k;
  EXPECT_DOUBLE_EQ(k.a, 1.0 / 3.0);
  EXPECT_EQ(k.a, k.b);
  EXPECT_EQ(ssg::FormConstants::harmonic(0.7).b, 0.7);
}
