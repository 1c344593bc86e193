#ifndef SSG_LAPLACIAN_HPP
#define SSG_LAPLACIAN_HPP

#include <cmath>
#include <variant>
#include <vector>

#include "energy.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "kusuoka.hpp"
#include "poly.hpp"
#include "summation.hpp"

namespace ssg {

/// A depth-l cylinder of the gasket part, or one cable.
using Carrier = std::variant<Word, CableEdge>;

struct LaplacianSample {
  Vec2 location{};
  Carrier carrier;
  Mat2 t_tilde{};
  double value = 0.0;
};

/// tr(T D^2 phi) at the representative point of the carrier: T = tau/kappa on a
/// cylinder (image of the barycentre), the direction projection on a cable (midpoint).
inline LaplacianSample teplyaev(const PolyJet &phi, const Carrier &carrier, const Gasket &g) {
  LaplacianSample s;
  s.carrier = carrier;
  if (const auto *w = std::get_if<Word>(&carrier)) {
    const CylinderMass cm = gibbs_tau(g, *w);
    if (!(cm.kappa > 1e-300)) throw DomainError("cylinder mass underflows for word " + w->str());
    s.t_tilde = (1.0 / cm.kappa) * cm.tau;
    s.location = g.word_point(*w);
  } else {
    const auto &c = std::get<CableEdge>(carrier);
    const Segment img = g.cable_segments(c.generation)[static_cast<std::size_t>(c.slot - 1)].mapped(g.compose(c.prefix));
    if (!(img.length() > 0.0)) throw DegenerateCableError(c.generation);
    s.t_tilde = projection_onto(img.velocity());
    s.location = img.at(0.5);
  }
  s.value = hs_inner(s.t_tilde, phi.hessian(s.location));
  return s;
}

inline LaplacianSample teplyaev(const Poly2 &phi, const Carrier &carrier, const Gasket &g) {
  return teplyaev(PolyJet(phi), carrier, g);
}

/// Samples on every depth-l cylinder, then on every cable of generation <= l.
inline std::vector<LaplacianSample> laplacian_samples(const Gasket &g, const Poly2 &phi, int l) {
  g.check_depth(l);
  const PolyJet jet(phi);
  std::vector<LaplacianSample> out;
  g.for_each_word(l, [&](const Word &w, const AffineMap2 &) { out.push_back(teplyaev(jet, w, g)); });
  for (int s = 1; s <= l; ++s) {
    g.for_each_word(s - 1, [&](const Word &prefix, const AffineMap2 &) {
      for (int slot = 1; slot <= 3; ++slot) out.push_back(teplyaev(jet, CableEdge{prefix, slot, s}, g));
    });
  }
  return out;
}

struct IbpRow {
  int depth = 0;
  double energy_lhs = 0.0;   // triangle form at depth d plus limit cable form through generation d
  double integral_rhs = 0.0; // -int (Laplacian phi) v d(kappa + m)
  double residual = 0.0;
};

/// -int tr(T D^2 phi) v d(kappa + m), with the depth-d cylinders paired at their
/// representative points and cables of generation <= d integrated exactly.
inline double laplacian_integral(const Gasket &g, const Poly2 &phi, const Poly2 &v, int depth,
                                 const QuadratureRule &quad = default_quadrature()) {
  const PolyJet jp(phi);
  CompensatedSum acc;
  g.for_each_word(depth, [&](const Word &w, const AffineMap2 &) {
    const Vec2 x = g.word_point(w);
    acc += hs_inner(jp.hessian(x), gibbs_tau(g, w).tau) * v(x);
  });
  for (int s = 1; s <= depth; ++s) {
    g.for_each_word(s - 1, [&](const Word &prefix, const AffineMap2 &) {
      for (int slot = 1; slot <= 3; ++slot) {
        const CableMass cm = cable_mass(g, prefix, s, slot);
        acc += cm.mass * quad.integrate([&](double t) {
          const Vec2 x = cm.image.at(t);
          return hs_inner(cm.projection, jp.hessian(x)) * v(x);
        });
      }
    });
  }
  return -acc.value();
}

/// |E(grad phi, grad v) + int (Laplacian phi) v d(kappa + m)| at one depth, with E
/// approximated by energy1(d) + energy2_limit(d).
inline IbpRow ibp_residual(const Gasket &g, const Poly2 &phi, const Poly2 &v, int depth,
                           const QuadratureRule &quad = default_quadrature()) {
  if (!g.params().has_positive_product()) throw DomainError("cable measure needs prod eps_i > 0");
  if (!vanishes_at_corners(v)) throw DomainError("test function v must vanish at A, B and C");
  if (depth < 1) throw DomainError("integration-by-parts check needs depth >= 1");
  g.check_depth(depth);
  IbpRow r;
  r.depth = depth;
  r.energy_lhs = energy1(g, depth, phi, v, quad) + energy2_limit(g, phi, v, depth, quad).value;
  r.integral_rhs = laplacian_integral(g, phi, v, depth, quad);
  r.residual = std::abs(r.energy_lhs - r.integral_rhs);
  return r;
}

inline std::vector<IbpRow> ibp_series(const Gasket &g, const Poly2 &phi, const Poly2 &v,
                                      const std::vector<int> &depths,
                                      const QuadratureRule &quad = default_quadrature()) {
  std::vector<IbpRow> out;
  for (int d : depths) out.push_back(ibp_residual(g, phi, v, d, quad));
  return out;
}

} // namespace ssg

#endif // SSG_LAPLACIAN_HPP
