#ifndef SSG_GEOMETRY_HPP
#define SSG_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "params.hpp"

namespace ssg {

/// x -> linear * x + offset
struct AffineMap2 {
  Mat2 linear = Mat2::identity();
  Vec2 offset{};

  static constexpr AffineMap2 identity() { return {}; }

  constexpr Vec2 operator()(const Vec2 &x) const { return linear * x + offset; }

  /// (*this) o inner
  constexpr AffineMap2 after(const AffineMap2 &inner) const {
    return {linear * inner.linear, linear * inner.offset + offset};
  }
};

enum class Corner : std::uint8_t { A = 0, B = 1, C = 2 };

inline constexpr double kSqrt3 = std::numbers::sqrt3;

/// Vertices of the unit equilateral triangle G_0.
inline constexpr Vec2 kVertexA{0.0, 0.0};
inline constexpr Vec2 kVertexB{kSqrt3 / 2.0, 0.5};
inline constexpr Vec2 kVertexC{kSqrt3 / 2.0, -0.5};

inline constexpr std::array<Vec2, 3> base_vertices() { return {kVertexA, kVertexB, kVertexC}; }
inline constexpr Vec2 corner_point(Corner p) { return base_vertices()[static_cast<int>(p)]; }
inline constexpr Vec2 barycenter() { return {kSqrt3 / 3.0, 0.0}; }

/// Anticlockwise rotation by theta.
inline Mat2 rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c, -s, s, c};
}

/// The triple (F_1, F_2, F_3); F_j fixes the j-th corner.
struct MapTriple {
  std::array<AffineMap2, 3> maps;

  /// 1-based, matching the word alphabet.
  const AffineMap2 &operator[](int j) const { return maps[static_cast<std::size_t>(j - 1)]; }
};

/// F_1 = diag(alpha, beta); F_2, F_3 are its conjugates by the rotations of +-2pi/3,
/// centred at B and C.
inline MapTriple triple_ab(double alpha, double beta) {
  const Mat2 t1 = Mat2::diag(alpha, beta);
  const double third = 2.0 * std::numbers::pi / 3.0;
  const Mat2 t2 = rotation(-third) * t1 * rotation(third);
  const Mat2 t3 = rotation(third) * t1 * rotation(-third);
  auto centred = [](const Mat2 &t, const Vec2 &p) { return AffineMap2{t, p - t * p}; };
  return {{AffineMap2{t1, {}}, centred(t2, kVertexB), centred(t3, kVertexC)}};
}

inline std::array<Mat2, 3> linear_parts(const MapTriple &t) { return {t[1].linear, t[2].linear, t[3].linear}; }

/// (alpha, beta) = eps * (3/5, 3/(5 * anisotropy)); anisotropy = 3 is the harmonic family.
inline MapTriple triple(double eps, double anisotropy = 3.0) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw DomainError("triple: eps must lie in (0,1], got " + std::to_string(eps));
  }
  const double alpha = 0.6 * eps;
  return triple_ab(alpha, alpha / anisotropy);
}

/// Finite word over {1,2,3}; the empty word indexes the identity map.
class Word {
public:
  Word() = default;
  Word(std::initializer_list<int> symbols) {
    for (int s : symbols) push_back(s);
  }
  static Word from_string(std::string_view text) {
    Word w;
    for (char ch : text) {
      if (ch < '1' || ch > '3') throw DomainError("word symbols must be 1, 2 or 3");
      w.push_back(ch - '0');
    }
    return w;
  }
  static Word repeated(int symbol, int length) {
    Word w;
    for (int k = 0; k < length; ++k) w.push_back(symbol);
    return w;
  }

  void push_back(int symbol) {
    if (symbol < 1 || symbol > 3) throw DomainError("word symbol out of range");
    symbols_.push_back(static_cast<std::uint8_t>(symbol));
  }
  void pop_back() { symbols_.pop_back(); }
  void reserve(std::size_t n) { symbols_.reserve(n); }

  int size() const { return static_cast<int>(symbols_.size()); }
  bool empty() const { return symbols_.empty(); }
  int operator[](int k) const { return symbols_[static_cast<std::size_t>(k)]; }

  Word extended(int symbol) const {
    Word w = *this;
    w.push_back(symbol);
    return w;
  }

  std::string str() const {
    std::string s;
    for (auto c : symbols_) s.push_back(static_cast<char>('0' + c));
    return s;
  }
  std::vector<int> symbols() const { return {symbols_.begin(), symbols_.end()}; }

  /// Base-3 code; lexicographic among words of equal length.
  std::uint64_t code() const {
    std::uint64_t c = 0;
    for (auto s : symbols_) c = 3 * c + (s - 1);
    return c;
  }

  friend auto operator<=>(const Word &, const Word &) = default;
  friend bool operator==(const Word &, const Word &) = default;

private:
  std::vector<std::uint8_t> symbols_;
};

/// gamma_PQ(t) = (1-t) P + t Q
struct Segment {
  Vec2 p;
  Vec2 q;

  constexpr Vec2 at(double t) const { return (1.0 - t) * p + t * q; }
  constexpr Vec2 velocity() const { return q - p; }
  double length() const { return norm(q - p); }
  Segment mapped(const AffineMap2 &f) const { return {f(p), f(q)}; }
};

enum class Side : std::uint8_t { AB = 0, BC = 1, AC = 2 };
inline constexpr std::array<Side, 3> kSides{Side::AB, Side::BC, Side::AC};

inline constexpr std::pair<Corner, Corner> side_corners(Side s) {
  switch (s) {
  case Side::AB: return {Corner::A, Corner::B};
  case Side::BC: return {Corner::B, Corner::C};
  default: return {Corner::A, Corner::C};
  }
}
inline constexpr Segment side_segment(Side s) {
  const auto [p, q] = side_corners(s);
  return {corner_point(p), corner_point(q)};
}
inline constexpr const char *side_name(Side s) {
  switch (s) {
  case Side::AB: return "AB";
  case Side::BC: return "BC";
  default: return "AC";
  }
}

/// End of a cable slot of Omega^s: the point F^s_map(corner).
struct CableEnd {
  int map;
  Corner corner;
};
/// Slot 1: F_1(B)F_2(A), slot 2: F_1(C)F_3(A), slot 3: F_2(C)F_3(B).
inline constexpr std::pair<CableEnd, CableEnd> cable_slot_ends(int slot) {
  switch (slot) {
  case 1: return {{1, Corner::B}, {2, Corner::A}};
  case 2: return {{1, Corner::C}, {3, Corner::A}};
  default: return {{2, Corner::C}, {3, Corner::B}};
  }
}

/// The map index fixing a corner: F_1 fixes A, F_2 fixes B, F_3 fixes C.
inline constexpr int fixing_map(Corner p) { return static_cast<int>(p) + 1; }

struct TriangleEdge {
  Word word;
  Side side;
};
struct CableEdge {
  Word prefix;
  int slot;
  int generation;
};

struct EdgeId {
  std::variant<TriangleEdge, CableEdge> kind;
  double prefactor = 0.0;

  bool is_cable() const { return std::holds_alternative<CableEdge>(kind); }
};

/// One edge of G_l: the segment in reference coordinates, and the word map placing it.
struct PrefractalEdge {
  EdgeId id;
  Segment segment;
  AffineMap2 map;

  Segment image() const { return segment.mapped(map); }
};

/// Point-in-triangle with orientation predicates; tol is applied to the
/// normalised barycentric-like coordinates.
inline bool point_in_triangle(const Vec2 &x, const std::array<Vec2, 3> &t, double tol = 1e-12) {
  const double area = cross(t[1] - t[0], t[2] - t[0]);
  if (area == 0.0) return false;
  const double l0 = cross(t[1] - x, t[2] - x) / area;
  const double l1 = cross(t[2] - x, t[0] - x) / area;
  const double l2 = cross(t[0] - x, t[1] - x) / area;
  return l0 >= -tol && l1 >= -tol && l2 >= -tol;
}

/// Separating-axis test for two closed triangles; true when an edge normal
/// separates them by more than tol.
inline bool triangles_disjoint(const std::array<Vec2, 3> &s, const std::array<Vec2, 3> &t,
                               double tol = 1e-12) {
  auto separated_by_edges_of = [tol](const std::array<Vec2, 3> &p, const std::array<Vec2, 3> &q) {
    for (int k = 0; k < 3; ++k) {
      const Vec2 e = p[(k + 1) % 3] - p[k];
      const Vec2 n{-e.y, e.x};
      const double scale = norm(n);
      double pmin = dot(n, p[0]), pmax = pmin;
      for (const auto &v : p) {
        pmin = std::min(pmin, dot(n, v));
        pmax = std::max(pmax, dot(n, v));
      }
      double qmin = dot(n, q[0]), qmax = qmin;
      for (const auto &v : q) {
        qmin = std::min(qmin, dot(n, v));
        qmax = std::max(qmax, dot(n, v));
      }
      if (qmin > pmax + tol * scale || pmin > qmax + tol * scale) return true;
    }
    return false;
  };
  return separated_by_edges_of(s, t) || separated_by_edges_of(t, s);
}

inline std::array<Vec2, 3> image_triangle(const AffineMap2 &f) {
  return {f(kVertexA), f(kVertexB), f(kVertexC)};
}

/// The harmonic embedding attached to a stretching sequence: level-indexed map
/// triples, word compositions, energy prefactors and pre-fractal enumeration.
class Gasket {
public:
  static constexpr int kDefaultDepthCap = 12;
  static constexpr int kCachedLevels = 64;

  explicit Gasket(ParamSeq seq, FormConstants constants = {}, double anisotropy = 3.0,
                  int depth_cap = kDefaultDepthCap)
      : seq_(std::move(seq)), constants_(constants), anisotropy_(anisotropy), depth_cap_(depth_cap) {
    if (!(constants_.a > 0.0) || !(constants_.b > 0.0)) {
      throw DomainError("energy constants a, b must be positive");
    }
    if (!(anisotropy_ >= 1.0)) throw DomainError("anisotropy alpha/beta must be >= 1");
    triples_.reserve(kCachedLevels);
    for (int i = 1; i <= kCachedLevels; ++i) triples_.push_back(triple(seq_.eps(i), anisotropy_));
  }

  const ParamSeq &params() const { return seq_; }
  const FormConstants &constants() const { return constants_; }
  double anisotropy() const { return anisotropy_; }
  int depth_cap() const { return depth_cap_; }

  void check_depth(int l) const {
    if (l < 0) throw DomainError("depth must be >= 0");
    if (l > depth_cap_) throw DepthCapError(l, depth_cap_);
  }

  /// The triple used at word position `level` (1-based), built from eps_level.
  MapTriple level_triple(int level) const {
    if (level < 1) throw DomainError("level must be >= 1");
    if (level <= kCachedLevels) return triples_[static_cast<std::size_t>(level - 1)];
    return triple(seq_.eps(level), anisotropy_);
  }

  /// F_{w_1} o ... o F_{w_l}, with position k using the level-k triple.
  AffineMap2 compose(const Word &w) const {
    AffineMap2 f = AffineMap2::identity();
    for (int k = 0; k < w.size(); ++k) f = f.after(level_triple(k + 1)[w[k]]);
    return f;
  }

  /// The three generation-s cables in reference coordinates.
  std::array<Segment, 3> cable_segments(int s) const {
    const MapTriple t = level_triple(s);
    std::array<Segment, 3> out;
    for (int slot = 1; slot <= 3; ++slot) {
      const auto [from, to] = cable_slot_ends(slot);
      out[static_cast<std::size_t>(slot - 1)] = {t[from.map](corner_point(from.corner)),
                                                 t[to.map](corner_point(to.corner))};
    }
    return out;
  }

  /// Same embedding for the shifted sequence.
  Gasket shifted() const { return Gasket(seq_.shift(), constants_, anisotropy_, depth_cap_); }

  /// a / lam_tilde_l
  double triangle_weight(int l) const { return constants_.a / seq_.lam_tilde(l); }

  /// b / (lam_tilde_{s-1} * eps_tilde^l_s * (1 - eps_s))
  double cable_weight(int s, int l) const {
    return constants_.b / (seq_.lam_tilde(s - 1) * seq_.eps_tilde(s, l) * cable_defect(s));
  }

  /// a / (lam_tilde_{s-1} * eps_tilde^inf_s * (1 - eps_s))
  double cable_weight_limit(int s) const {
    return constants_.a /
           (seq_.lam_tilde(s - 1) * std::exp(seq_.log_eps_tilde_inf(s)) * cable_defect(s));
  }

  /// b / (1 - eps_s): the prefactor of the single-generation cable energy.
  double cable_energy_weight(int s) const { return constants_.b / cable_defect(s); }

  /// Visits every word of length l in lexicographic order with its composed map.
  template <class Fn> void for_each_word(int l, Fn &&fn) const {
    check_depth(l);
    Word w;
    w.reserve(static_cast<std::size_t>(l));
    walk(1, l, AffineMap2::identity(), w, fn);
  }

  /// Visits the edges of G_l: triangle edges (word order, sides AB, BC, AC) then
  /// cables by generation, prefix order and slot.
  template <class Fn> void for_each_edge(int l, Fn &&fn) const {
    check_depth(l);
    const double tri_w = triangle_weight(l);
    for_each_word(l, [&](const Word &w, const AffineMap2 &f) {
      for (Side side : kSides) fn(PrefractalEdge{EdgeId{TriangleEdge{w, side}, tri_w}, side_segment(side), f});
    });
    for (int s = 1; s <= l; ++s) {
      const double cw = cable_weight(s, l);
      const auto cables = cable_segments(s);
      for_each_word(s - 1, [&](const Word &prefix, const AffineMap2 &f) {
        for (int slot = 1; slot <= 3; ++slot) {
          fn(PrefractalEdge{EdgeId{CableEdge{prefix, slot, s}, cw},
                            cables[static_cast<std::size_t>(slot - 1)], f});
        }
      });
    }
  }

  std::vector<PrefractalEdge> prefractal_edges(int l) const {
    std::vector<PrefractalEdge> out;
    for_each_edge(l, [&](const PrefractalEdge &e) { out.push_back(e); });
    return out;
  }

  /// Image of the barycentre of G_0: representative point of the cylinder [w].
  Vec2 word_point(const Word &w) const { return compose(w)(barycenter()); }

private:
  double cable_defect(int s) const {
    const double d = seq_.one_minus_eps(s);
    if (!(d > 0.0)) throw DegenerateCableError(s);
    return d;
  }

  template <class Fn>
  void walk(int level, int l, const AffineMap2 &f, Word &w, Fn &fn) const {
    if (level > l) {
      fn(static_cast<const Word &>(w), f);
      return;
    }
    const MapTriple t = level_triple(level);
    for (int j = 1; j <= 3; ++j) {
      w.push_back(j);
      walk(level + 1, l, f.after(t[j]), w, fn);
      w.pop_back();
    }
  }

  ParamSeq seq_;
  FormConstants constants_;
  double anisotropy_;
  int depth_cap_;
  std::vector<MapTriple> triples_;
};

/// 3 * 3^l triangle edges plus 3 (3^l - 1) / 2 cables.
inline std::int64_t prefractal_edge_count(int l) {
  std::int64_t p = 1;
  for (int k = 0; k < l; ++k) p *= 3;
  return 3 * p + 3 * (p - 1) / 2;
}

} // namespace ssg

#endif // SSG_GEOMETRY_HPP
