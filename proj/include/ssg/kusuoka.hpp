#ifndef SSG_KUSUOKA_HPP
#define SSG_KUSUOKA_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "energy.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "poly.hpp"
#include "summation.hpp"

namespace ssg {

/// Coordinates of a symmetric matrix in the orthonormal basis
/// {E11, (E12 + E21)/sqrt2, E22}.
inline std::array<double, 3> sym_coords(const Mat2 &m) {
  return {m.a, std::numbers::sqrt2 * 0.5 * (m.b + m.c), m.d};
}
inline Mat2 sym_from_coords(const std::array<double, 3> &x) {
  const double off = x[1] / std::numbers::sqrt2;
  return {x[0], off, off, x[2]};
}

/// A -> sum_i DF_i^T A DF_i on symmetric matrices.
class SymOperator3 {
public:
  explicit SymOperator3(const std::array<Mat2, 3> &df) : df_(df) {
    for (int k = 0; k < 3; ++k) {
      std::array<double, 3> e{};
      e[static_cast<std::size_t>(k)] = 1.0;
      const auto col = sym_coords(apply(sym_from_coords(e)));
      for (int r = 0; r < 3; ++r) m_[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] = col[static_cast<std::size_t>(r)];
    }
  }

  Mat2 apply(const Mat2 &a) const {
    Mat2 out = Mat2::zero();
    for (const auto &t : df_) out += t.transposed() * a * t;
    return out;
  }

  std::array<double, 3> operator*(const std::array<double, 3> &x) const {
    std::array<double, 3> y{};
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t k = 0; k < 3; ++k) y[r] += m_[r][k] * x[k];
    return y;
  }

  const std::array<std::array<double, 3>, 3> &matrix() const { return m_; }

private:
  std::array<Mat2, 3> df_;
  std::array<std::array<double, 3>, 3> m_{};
};

/// Operator side: sum_i DF_i^T A DF_i for the triple built from eps.
inline Mat2 ruelle_apply(const Mat2 &a, double eps, double anisotropy = 3.0) {
  if (!a.is_symmetric()) throw DomainError("Ruelle operator acts on symmetric matrices");
  return SymOperator3(linear_parts(triple(eps, anisotropy))).apply(a);
}

struct PerronPair {
  double lambda = 0.0;
  Mat2 q{};           // trace 2
  double residual = 0.0; // ||L Q - lambda Q||_HS
  int iterations = 0;
};

/// Dominant eigenpair by power iteration from Id.
inline PerronPair perron(double eps, double anisotropy = 3.0, int max_iter = 10000) {
  const SymOperator3 op(linear_parts(triple(eps, anisotropy)));
  auto normalise = [](std::array<double, 3> x) {
    const double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    for (auto &c : x) c /= n;
    return x;
  };
  std::array<double, 3> x = normalise(sym_coords(Mat2::identity()));
  double lambda = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const auto y = op * x;
    const double next = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
    const auto xn = normalise(y);
    const double dx = std::max({std::abs(xn[0] - x[0]), std::abs(xn[1] - x[1]), std::abs(xn[2] - x[2])});
    const double dl = std::abs(next - lambda) / next;
    x = xn;
    lambda = next;
    if (dx < 1e-14 && dl < 1e-14) {
      PerronPair p;
      p.lambda = lambda;
      p.q = sym_from_coords(x);
      p.q *= 2.0 / p.q.trace();
      p.residual = hs_norm(op.apply(p.q) - p.lambda * p.q);
      p.iterations = it;
      return p;
    }
  }
  throw ConvergenceError("power iteration did not converge in " + std::to_string(max_iter) + " steps");
}

struct CylinderMass {
  Word word;
  Mat2 tau{};
  double kappa = 0.0;
};

/// tau(G_0 part) = Id / 2, so that kappa is a probability.
inline constexpr Mat2 kTauRoot{0.5, 0.0, 0.0, 0.5};

/// a * sum over the sides of G_0 of the projection onto the side direction.
inline Mat2 tau0(double a) {
  Mat2 m = Mat2::zero();
  for (Side s : kSides) m += projection_onto(side_segment(s).velocity());
  return a * m;
}

/// tau([w]) = DF_w (Id/2) DF_w^T / lam_tilde_l. The product is accumulated with
/// each factor scaled by lambda_k^{-1/2}, which keeps long words from underflowing.
inline CylinderMass gibbs_tau(const Gasket &g, const Word &w) {
  Mat2 n = Mat2::identity();
  for (int k = 0; k < w.size(); ++k) {
    n = n * ((1.0 / std::sqrt(g.params().lambda(k + 1))) * g.level_triple(k + 1)[w[k]].linear);
  }
  CylinderMass c{w, n * kTauRoot * n.transposed(), 0.0};
  c.kappa = c.tau.trace();
  return c;
}

/// Depth-l aggregates of the iterated adjoint started from tau0(a): the deepest
/// level is applied first, each step prepending one symbol. Lexicographic order.
inline std::vector<CylinderMass> adjoint_aggregate(const Gasket &g, int l) {
  g.check_depth(l);
  std::vector<Mat2> cur{tau0(g.constants().a)};
  for (int k = l; k >= 1; --k) {
    const MapTriple t = g.level_triple(k);
    const double inv = 1.0 / g.params().lambda(k);
    std::vector<Mat2> next;
    next.reserve(3 * cur.size());
    for (int j = 1; j <= 3; ++j) {
      const Mat2 &df = t[j].linear;
      for (const auto &m : cur) next.push_back(inv * (df * m * df.transposed()));
    }
    cur = std::move(next);
  }
  std::vector<CylinderMass> out;
  out.reserve(cur.size());
  std::size_t idx = 0;
  g.for_each_word(l, [&](const Word &w, const AffineMap2 &) {
    const Mat2 &m = cur[idx++];
    out.push_back({w, m, m.trace()});
  });
  return out;
}

/// All depth-l cylinder masses in lexicographic word order.
inline std::vector<CylinderMass> kusuoka_masses(const Gasket &g, int l) {
  g.check_depth(l);
  std::vector<CylinderMass> out;
  g.for_each_word(l, [&](const Word &w, const AffineMap2 &) { out.push_back(gibbs_tau(g, w)); });
  return out;
}

struct CableMass {
  Word prefix;
  int generation = 0;
  int slot = 0;
  double mass = 0.0;
  Mat2 projection{};
  Segment image;
};

inline CableMass cable_mass(const Gasket &g, const Word &prefix, int s, int slot) {
  if (s < 1 || prefix.size() != s - 1) throw DomainError("cable prefix must have length s - 1");
  if (slot < 1 || slot > 3) throw DomainError("cable slot must be 1, 2 or 3");
  const double w = g.cable_weight_limit(s);
  const AffineMap2 f = g.compose(prefix);
  const Segment img = g.cable_segments(s)[static_cast<std::size_t>(slot - 1)].mapped(f);
  const Vec2 d = img.velocity();
  return {prefix, s, slot, w * norm2(d), projection_onto(d), img};
}

struct MeasureEnergy {
  double gasket = 0.0;
  double cable = 0.0;
  double total = 0.0;
};

/// int (T grad u, grad v) d(kappa + m): depth-d cylinders with the matrix mass
/// paired at the representative point, cables of generation <= d by exact quadrature.
inline MeasureEnergy energy_via_measure(const Gasket &g, const Poly2 &u, const Poly2 &v, int depth,
                                        const QuadratureRule &quad = default_quadrature()) {
  if (!g.params().has_positive_product()) throw DomainError("cable measure needs prod eps_i > 0");
  g.check_depth(depth);
  const PolyJet ju(u), jv(v);
  MeasureEnergy r;
  CompensatedSum gasket;
  g.for_each_word(depth, [&](const Word &w, const AffineMap2 &) {
    const Vec2 x = g.word_point(w);
    gasket += dot(ju.gradient(x), gibbs_tau(g, w).tau * jv.gradient(x));
  });
  r.gasket = gasket.value();

  CompensatedSum cable;
  for (int s = 1; s <= depth; ++s) {
    g.for_each_word(s - 1, [&](const Word &prefix, const AffineMap2 &) {
      for (int slot = 1; slot <= 3; ++slot) {
        const CableMass cm = cable_mass(g, prefix, s, slot);
        cable += cm.mass * quad.integrate([&](double t) {
          const Vec2 x = cm.image.at(t);
          return dot(cm.projection * ju.gradient(x), jv.gradient(x));
        });
      }
    });
  }
  r.cable = cable.value();
  r.total = r.gasket + r.cable;
  return r;
}

} // namespace ssg

#endif // SSG_KUSUOKA_HPP
