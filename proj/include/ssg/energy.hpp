#ifndef SSG_ENERGY_HPP
#define SSG_ENERGY_HPP

#include <array>
#include <cmath>

#include "errors.hpp"
#include "geometry.hpp"
#include "poly.hpp"
#include "quadrature.hpp"
#include "summation.hpp"

namespace ssg {

inline const QuadratureRule &default_quadrature() {
  static const QuadratureRule rule(QuadratureRule::kDefaultOrder);
  return rule;
}

struct EnergyReport {
  double e1 = 0.0;
  double e2 = 0.0;
  double total = 0.0;
};

/// A truncated infinite sum with a rigorous bound on the omitted part.
struct TruncatedValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// Both sides of an identity between forms and their difference.
struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double bound = 0.0; // truncation bound, 0 for exact identities
};

/// int_0^1 (u o f o gamma)'(t) (v o f o gamma)'(t) dt
inline double segment_pairing(const PolyJet &u, const PolyJet &v, const AffineMap2 &map, const Segment &seg,
                              const QuadratureRule &quad = default_quadrature()) {
  const Segment img = seg.mapped(map);
  const Vec2 vel = img.velocity();
  if (&u == &v) {
    return quad.integrate([&](double t) {
      const double du = dot(u.gradient(img.at(t)), vel);
      return du * du;
    });
  }
  return quad.integrate([&](double t) {
    const Vec2 x = img.at(t);
    return dot(u.gradient(x), vel) * dot(v.gradient(x), vel);
  });
}

inline double segment_pairing(const Poly2 &u, const Poly2 &v, const AffineMap2 &map, const Segment &seg,
                              const QuadratureRule &quad = default_quadrature()) {
  const PolyJet ju(u), jv(v);
  return segment_pairing(ju, jv, map, seg, quad);
}

namespace detail {

/// u and v as jets; v aliases u when the polynomials coincide.
class JetPair {
public:
  JetPair(const Poly2 &u, const Poly2 &v) : u_(u), v_(v), same_(u == v) {}
  const PolyJet &u() const { return u_; }
  const PolyJet &v() const { return same_ ? u_ : v_; }

private:
  PolyJet u_, v_;
  bool same_;
};

/// sum_{|w| = l} sum_sides pairing over the images F_w(G_0), unweighted.
inline double triangle_sum(const Gasket &g, int l, const JetPair &f, const QuadratureRule &quad) {
  CompensatedSum acc;
  g.for_each_word(l, [&](const Word &, const AffineMap2 &map) {
    for (Side side : kSides) acc += segment_pairing(f.u(), f.v(), map, side_segment(side), quad);
  });
  return acc.value();
}

/// sum over prefixes of length s-1 and the three slots of generation s, unweighted.
inline double cable_generation_sum(const Gasket &g, int s, const JetPair &f, const QuadratureRule &quad) {
  const auto cables = g.cable_segments(s);
  CompensatedSum acc;
  g.for_each_word(s - 1, [&](const Word &, const AffineMap2 &map) {
    for (const auto &seg : cables) acc += segment_pairing(f.u(), f.v(), map, seg, quad);
  });
  return acc.value();
}

} // namespace detail

/// Triangle part of the depth-l form: (a / lam_tilde_l) * sum over words and sides.
inline double energy1(const Gasket &g, int l, const Poly2 &u, const Poly2 &v,
                      const QuadratureRule &quad = default_quadrature()) {
  g.check_depth(l);
  return g.triangle_weight(l) * detail::triangle_sum(g, l, detail::JetPair(u, v), quad);
}

/// (b / (1 - eps_s)) * sum over the three unmapped generation-s cables.
inline double cable_energy(const Gasket &g, int s, const Poly2 &u, const Poly2 &v,
                           const QuadratureRule &quad = default_quadrature()) {
  if (s < 1) throw DomainError("cable generation must be >= 1");
  const double w = g.cable_energy_weight(s);
  const detail::JetPair f(u, v);
  CompensatedSum acc;
  for (const auto &seg : g.cable_segments(s))
    acc += segment_pairing(f.u(), f.v(), AffineMap2::identity(), seg, quad);
  return w * acc.value();
}

/// Cable part of the depth-l form, generations 1..l.
inline double energy2(const Gasket &g, int l, const Poly2 &u, const Poly2 &v,
                      const QuadratureRule &quad = default_quadrature()) {
  g.check_depth(l);
  const detail::JetPair f(u, v);
  CompensatedSum acc;
  for (int s = 1; s <= l; ++s) acc += g.cable_weight(s, l) * detail::cable_generation_sum(g, s, f, quad);
  return acc.value();
}

inline EnergyReport energy_total(const Gasket &g, int l, const Poly2 &u, const Poly2 &v,
                                 const QuadratureRule &quad = default_quadrature()) {
  EnergyReport r;
  r.e1 = energy1(g, l, u, v, quad);
  r.e2 = l == 0 ? 0.0 : energy2(g, l, u, v, quad);
  r.total = r.e1 + r.e2;
  return r;
}

/// Bound on the omitted generations s > s_max of the limit cable form.
/// Each generation contributes at most 6 a G_u G_v (1 - eps_s) / delta, where G is
/// a sup bound of the gradient on the hull and delta <= eps_tilde_inf_s.
inline double energy2_limit_tail(const Gasket &g, const Poly2 &u, const Poly2 &v, int s_max) {
  const double gu = PolyJet(u).gradient_bound();
  const double gv = PolyJet(v).gradient_bound();
  if (gu == 0.0 || gv == 0.0) return 0.0;
  const double delta = g.params().product_lower_bound();
  return 6.0 * g.constants().a * gu * gv / delta * g.params().tail_defect_sum(s_max);
}

/// Limit cable form truncated to generations s <= s_max, with its tail bound.
inline TruncatedValue energy2_limit(const Gasket &g, const Poly2 &u, const Poly2 &v, int s_max,
                                    const QuadratureRule &quad = default_quadrature()) {
  if (!g.params().has_positive_product()) {
    throw DomainError("limit cable form needs prod eps_i > 0 (geometric tail)");
  }
  if (s_max < 1) throw DomainError("s_max must be >= 1");
  g.check_depth(s_max - 1);
  const detail::JetPair f(u, v);
  CompensatedSum acc;
  for (int s = 1; s <= s_max; ++s)
    acc += g.cable_weight_limit(s) * detail::cable_generation_sum(g, s, f, quad);
  return {acc.value(), energy2_limit_tail(g, u, v, s_max)};
}

/// E_{l+1}(u,v) against (1/lambda_1) sum_i E^{shift}_l(u o F_i, v o F_i)
/// + (1/eps_tilde^{l+1}_1) * cable_energy(1).
inline IdentityCheck recurrence_residual(const Gasket &g, int l, const Poly2 &u, const Poly2 &v,
                                         const QuadratureRule &quad = default_quadrature()) {
  if (l < 1) throw DomainError("recurrence needs l >= 1");
  g.check_depth(l + 1);
  const Gasket sg = g.shifted();
  const MapTriple t = g.level_triple(1);
  CompensatedSum inner;
  for (int i = 1; i <= 3; ++i) inner += energy_total(sg, l, u.compose(t[i]), v.compose(t[i]), quad).total;
  const ParamSeq &seq = g.params();
  IdentityCheck r;
  r.lhs = energy_total(g, l + 1, u, v, quad).total;
  r.rhs = inner.value() / seq.lambda(1) + cable_energy(g, 1, u, v, quad) / seq.eps_tilde(1, l + 1);
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

/// Self-similarity of the limit form with both sides truncated consistently: the
/// sequence R at depth d against the shifted sequence at depth d-1.
inline IdentityCheck selfsimilar_residual(const Gasket &g, const Poly2 &u, const Poly2 &v, int depth,
                                          const QuadratureRule &quad = default_quadrature()) {
  if (depth < 1) throw DomainError("self-similarity check needs depth >= 1");
  if (!g.params().has_positive_product()) {
    throw DomainError("limit form needs prod eps_i > 0 (geometric tail)");
  }
  const ParamSeq &seq = g.params();
  const Gasket sg = g.shifted();
  const MapTriple t = g.level_triple(1);

  IdentityCheck r;
  const TruncatedValue lhs2 = energy2_limit(g, u, v, depth, quad);
  r.lhs = energy1(g, depth, u, v, quad) + lhs2.value;

  CompensatedSum inner;
  double inner_bound = 0.0;
  for (int i = 1; i <= 3; ++i) {
    const Poly2 ui = u.compose(t[i]), vi = v.compose(t[i]);
    inner += energy1(sg, depth - 1, ui, vi, quad);
    if (depth >= 2) {
      const TruncatedValue e2 = energy2_limit(sg, ui, vi, depth - 1, quad);
      inner += e2.value;
      inner_bound += e2.tail_bound;
    } else {
      inner_bound += energy2_limit_tail(sg, ui, vi, 0);
    }
  }
  r.rhs = inner.value() / seq.lambda(1) + cable_energy(g, 1, u, v, quad) / seq.eps_tilde_inf(1);
  r.residual = std::abs(r.lhs - r.rhs);
  r.bound = lhs2.tail_bound + inner_bound / seq.lambda(1);
  return r;
}

} // namespace ssg

#endif // SSG_ENERGY_HPP
