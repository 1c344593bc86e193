#ifndef SSG_HARMONICITY_HPP
#define SSG_HARMONICITY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <vector>

#include "energy.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "poly.hpp"
#include "summation.hpp"

namespace ssg {

/// A vertex of G_l named by a depth-l word and a corner: the point F_w(P).
/// Cable endpoints of generation s < l are lifted to depth l by appending the
/// symbol of the map fixing P, so each vertex has exactly one label.
struct VertexLabel {
  Word word;
  Corner corner = Corner::A;

  friend auto operator<=>(const VertexLabel &, const VertexLabel &) = default;
  friend bool operator==(const VertexLabel &, const VertexLabel &) = default;
};

struct StarEdge {
  EdgeId id;
  int endpoint = 0; // 0 when the edge starts at the vertex, 1 when it ends there
  double prefactor = 0.0;
  Vec2 tangent{};   // velocity of the mapped parametrization
};

struct VertexStar {
  VertexLabel label;
  Vec2 vertex{};
  std::vector<StarEdge> edges;

  bool is_corner() const {
    const int l = label.word.size();
    return label.word == Word::repeated(fixing_map(label.corner), l);
  }
  int triangle_edge_count() const {
    int n = 0;
    for (const auto &e : edges) n += e.id.is_cable() ? 0 : 1;
    return n;
  }
  int cable_count() const { return static_cast<int>(edges.size()) - triangle_edge_count(); }
};

/// Sum of +prefactor * tangent over edges leaving the vertex and -prefactor * tangent
/// over edges arriving; the u-boundary term at the vertex is <grad u, result>.
inline Vec2 boundary_vector(const VertexStar &star) {
  CompensatedSum x, y;
  for (const auto &e : star.edges) {
    const double s = e.endpoint == 0 ? e.prefactor : -e.prefactor;
    x += s * e.tangent.x;
    y += s * e.tangent.y;
  }
  return {x.value(), y.value()};
}

/// Stars of every vertex of G_l, ordered by label. Throws GeometryError when the
/// incidence structure is not the expected one.
inline std::vector<VertexStar> vertex_stars(const Gasket &g, int l) {
  g.check_depth(l);
  std::map<VertexLabel, VertexStar> stars;
  auto attach = [&](VertexLabel label, const Vec2 &at, StarEdge edge) {
    auto [it, inserted] = stars.try_emplace(label);
    VertexStar &st = it->second;
    if (inserted) {
      st.label = std::move(label);
      st.vertex = at;
    } else if (norm(st.vertex - at) > 1e-12) {
      throw GeometryError("edge endpoints disagree at vertex " + st.label.word.str());
    }
    st.edges.push_back(std::move(edge));
  };

  g.for_each_edge(l, [&](const PrefractalEdge &e) {
    const Segment img = e.image();
    const Vec2 vel = img.velocity();
    if (const auto *tri = std::get_if<TriangleEdge>(&e.id.kind)) {
      const auto [p, q] = side_corners(tri->side);
      attach({tri->word, p}, img.p, {e.id, 0, e.id.prefactor, vel});
      attach({tri->word, q}, img.q, {e.id, 1, e.id.prefactor, vel});
    } else {
      const auto &cab = std::get<CableEdge>(e.id.kind);
      const auto [from, to] = cable_slot_ends(cab.slot);
      auto lift = [&](const CableEnd &end) {
        Word w = cab.prefix.extended(end.map);
        while (w.size() < l) w.push_back(fixing_map(end.corner));
        return VertexLabel{std::move(w), end.corner};
      };
      attach(lift(from), img.p, {e.id, 0, e.id.prefactor, vel});
      attach(lift(to), img.q, {e.id, 1, e.id.prefactor, vel});
    }
  });

  std::vector<VertexStar> out;
  out.reserve(stars.size());
  for (auto &[label, st] : stars) {
    const bool corner = st.is_corner();
    const int tri = st.triangle_edge_count(), cab = st.cable_count();
    if (tri != 2 || cab != (corner || l == 0 ? 0 : 1)) {
      throw GeometryError("vertex " + label.word.str() + "/" + "ABC"[static_cast<int>(label.corner)] +
                          " has " + std::to_string(tri) + " triangle edges and " + std::to_string(cab) +
                          " cables");
    }
    out.push_back(std::move(st));
  }
  return out;
}

struct HarmonicReport {
  int depth = 0;
  double residual = 0.0;       // max |boundary vector| over interior vertices
  VertexLabel worst_vertex;
  Vec2 worst_point{};
  std::size_t interior_vertices = 0;
  std::array<Vec2, 3> corner_vectors{}; // at A, B, C
};

inline HarmonicReport harmonic_report(const Gasket &g, int l) {
  if (l < 1) throw DomainError("harmonicity needs depth >= 1");
  HarmonicReport r;
  r.depth = l;
  bool first = true;
  for (const auto &st : vertex_stars(g, l)) {
    const Vec2 bv = boundary_vector(st);
    if (st.is_corner()) {
      r.corner_vectors[static_cast<std::size_t>(st.label.corner)] = bv;
      continue;
    }
    ++r.interior_vertices;
    const double n = norm(bv);
    if (first || n > r.residual) {
      r.residual = n;
      r.worst_vertex = st.label;
      r.worst_point = st.vertex;
      first = false;
    }
  }
  return r;
}

inline double harmonic_residual(const Gasket &g, int l) { return harmonic_report(g, l).residual; }

/// Density of the weak H^1 Laplacian on one edge, as a polynomial in the edge parameter t.
struct EdgeDensity {
  EdgeId id;
  Segment image;
  Poly1 density; // w_e (u o zeta)''(t) / L_e
};

inline constexpr double kHarmonicTolerance = 1e-10;

/// Per-edge densities g with E_l(u, v) = -int g v dH^1 for v vanishing at A, B, C.
inline std::vector<EdgeDensity> weak_laplacian_H1(const Gasket &g, int l, const Poly2 &u) {
  const double res = harmonic_residual(g, l);
  if (res > kHarmonicTolerance * g.constants().a) {
    throw DomainError("weak Laplacian needs a harmonic pre-fractal; boundary residual " + std::to_string(res));
  }
  std::vector<EdgeDensity> out;
  g.for_each_edge(l, [&](const PrefractalEdge &e) {
    const Poly1 second = compose_with_segment(u, e.map, e.segment).derivative().derivative();
    const Segment img = e.image();
    out.push_back({e.id, img, (e.id.prefactor / img.length()) * second});
  });
  return out;
}

/// E_l(u, v) against -sum_e int g v dH^1 (both evaluated exactly on each edge).
inline IdentityCheck weak_ibp_check(const Gasket &g, int l, const Poly2 &u, const Poly2 &v) {
  if (!vanishes_at_corners(v)) throw DomainError("test function must vanish at A, B and C");
  IdentityCheck r;
  r.lhs = energy_total(g, l, u, v).total;
  CompensatedSum rhs;
  for (const auto &d : weak_laplacian_H1(g, l, u)) {
    const Poly1 vt = compose_with_segment(v, AffineMap2::identity(), d.image);
    rhs += -(d.image.length() * (d.density * vt).integral01());
  }
  r.rhs = rhs.value();
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

struct NdReport {
  double gamma = 0.0;       // refined minimum
  double lower_bound = 0.0; // grid minimum minus the Lipschitz slack
  double theta = 0.0;       // direction c = (cos theta, sin theta)
  double phi = 0.0;         // direction e = (cos phi, sin phi)
};

/// min over unit c, e of max_i |(M_i c, e)|, by a grid of `steps` x `steps` angles
/// in [0, pi)^2 followed by local refinement around the minimiser.
inline NdReport nd_report(const std::array<Mat2, 3> &m, int steps = 720) {
  auto objective = [&m](double th, double ph) {
    const Vec2 c{std::cos(th), std::sin(th)};
    const Vec2 e{std::cos(ph), std::sin(ph)};
    double best = 0.0;
    for (const auto &mi : m) best = std::max(best, std::abs(dot(mi * c, e)));
    return best;
  };
  const double h = std::numbers::pi / steps;
  NdReport r;
  r.gamma = objective(0.0, 0.0);
  for (int i = 0; i < steps; ++i) {
    for (int j = 0; j < steps; ++j) {
      const double v = objective(i * h, j * h);
      if (v < r.gamma) {
        r.gamma = v;
        r.theta = i * h;
        r.phi = j * h;
      }
    }
  }
  double lip = 0.0;
  for (const auto &mi : m) lip = std::max(lip, op_norm(mi));
  // Every point lies within h/2 of a grid node in each angle.
  r.lower_bound = std::max(0.0, r.gamma - lip * h);

  double span = h;
  for (int round = 0; round < 8; ++round) {
    const double th0 = r.theta, ph0 = r.phi;
    const int k = 20;
    for (int i = -k; i <= k; ++i) {
      for (int j = -k; j <= k; ++j) {
        const double th = th0 + span * i / k, ph = ph0 + span * j / k;
        const double v = objective(th, ph);
        if (v < r.gamma) {
          r.gamma = v;
          r.theta = th;
          r.phi = ph;
        }
      }
    }
    span /= 10.0;
  }
  return r;
}

inline double nd_gamma(double eps) { return nd_report(linear_parts(triple(eps))).gamma; }
inline double nd_gamma(const std::array<Mat2, 3> &m) { return nd_report(m).gamma; }

} // namespace ssg

#endif // SSG_HARMONICITY_HPP
