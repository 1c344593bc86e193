#ifndef SSG_PARAMS_HPP
#define SSG_PARAMS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "summation.hpp"

namespace ssg {

/// Tail rule eps_i = exp(-c * r^i) for indices past the explicit prefix.
struct GeometricTail {
  double c = 0.0;
  double r = 0.5;
};

/// eps_i = value for indices past the prefix. The infinite product vanishes, so
/// only finite-depth quantities are available.
struct ConstantTail {
  double value = 0.5;
};

/// The stretching sequence {eps_i}_{i>=1}: an explicit prefix followed by a tail rule.
/// Immutable after construction.
class ParamSeq {
public:
  using Tail = std::variant<GeometricTail, ConstantTail>;

  ParamSeq(std::vector<double> prefix, Tail tail) : prefix_(std::move(prefix)), tail_(tail) {
    for (std::size_t k = 0; k < prefix_.size(); ++k) {
      if (!(prefix_[k] > 0.0 && prefix_[k] < 1.0)) {
        throw DomainError("eps_" + std::to_string(k + 1) + " = " + std::to_string(prefix_[k]) +
                          " is outside (0,1)");
      }
    }
    if (const auto *g = std::get_if<GeometricTail>(&tail_)) {
      if (!(g->c > 0.0) || !std::isfinite(g->c)) {
        throw DomainError("tail coefficient c must be > 0 (c = 0 means eps_i = 1)");
      }
      if (!(g->r > 0.0 && g->r < 1.0)) {
        throw DomainError("tail ratio r must lie in (0,1)");
      }
    } else {
      const double v = std::get<ConstantTail>(tail_).value;
      if (!(v > 0.0 && v < 1.0)) {
        throw DomainError("constant tail value must lie in (0,1)");
      }
    }
  }

  static ParamSeq with_tail(std::vector<double> prefix, double c, double r) {
    return ParamSeq(std::move(prefix), GeometricTail{c, r});
  }
  static ParamSeq constant(double value, std::vector<double> prefix = {}) {
    return ParamSeq(std::move(prefix), ConstantTail{value});
  }

  const std::vector<double> &prefix() const { return prefix_; }
  const Tail &tail() const { return tail_; }

  /// True when prod eps_i > 0, i.e. the limit quantities exist.
  bool has_positive_product() const { return std::holds_alternative<GeometricTail>(tail_); }

  double eps(int i) const {
    check_index(i);
    if (static_cast<std::size_t>(i) <= prefix_.size()) return prefix_[i - 1];
    if (const auto *g = std::get_if<GeometricTail>(&tail_)) return std::exp(-g->c * std::pow(g->r, i));
    return std::get<ConstantTail>(tail_).value;
  }

  double log_eps(int i) const {
    check_index(i);
    if (static_cast<std::size_t>(i) <= prefix_.size()) return std::log(prefix_[i - 1]);
    if (const auto *g = std::get_if<GeometricTail>(&tail_)) return -g->c * std::pow(g->r, i);
    return std::log(std::get<ConstantTail>(tail_).value);
  }

  /// 1 - eps_i without cancellation for tail entries close to 1.
  double one_minus_eps(int i) const {
    check_index(i);
    if (static_cast<std::size_t>(i) <= prefix_.size()) return 1.0 - prefix_[i - 1];
    if (const auto *g = std::get_if<GeometricTail>(&tail_)) return -std::expm1(-g->c * std::pow(g->r, i));
    return 1.0 - std::get<ConstantTail>(tail_).value;
  }

  /// lambda_i = (3/5) eps_i^2
  double lambda(int i) const {
    const double e = eps(i);
    return 0.6 * e * e;
  }

  /// prod_{i=1..l} lambda_i, with lam_tilde(0) = 1.
  double lam_tilde(int l) const {
    if (l < 0) throw DomainError("lam_tilde: negative depth");
    CompensatedSum logs;
    for (int i = 1; i <= l; ++i) logs += std::log(0.6) + 2.0 * log_eps(i);
    return std::exp(logs.value());
  }

  /// prod_{i=s..l} eps_i for 1 <= s <= l.
  double eps_tilde(int s, int l) const {
    if (s < 1) throw DomainError("eps_tilde: s must be >= 1");
    if (s > l) throw DomainError("eps_tilde: s > l");
    CompensatedSum logs;
    for (int i = s; i <= l; ++i) logs += log_eps(i);
    return std::exp(logs.value());
  }

  /// log of prod_{i>=s} eps_i, closed form through the geometric tail.
  double log_eps_tilde_inf(int s) const {
    if (s < 1) throw DomainError("eps_tilde_inf: s must be >= 1");
    const auto *g = std::get_if<GeometricTail>(&tail_);
    if (g == nullptr) {
      throw DomainError("infinite product of a constant sequence is zero (finite-depth only)");
    }
    CompensatedSum logs;
    const int k = static_cast<int>(prefix_.size());
    for (int i = s; i <= k; ++i) logs += std::log(prefix_[i - 1]);
    const int first_tail = std::max(s, k + 1);
    logs += -g->c * std::pow(g->r, first_tail) / (1.0 - g->r);
    return logs.value();
  }

  double eps_tilde_inf(int s) const { return std::exp(log_eps_tilde_inf(s)); }

  /// delta with delta <= eps_tilde_inf(s) for every s (the full product).
  double product_lower_bound() const { return eps_tilde_inf(1); }

  /// Upper bound for sum_{s > s_max} (1 - eps_s), using 1 - exp(-x) <= x on the tail.
  double tail_defect_sum(int s_max) const {
    const auto *g = std::get_if<GeometricTail>(&tail_);
    if (g == nullptr) throw DomainError("defect sum diverges for a constant sequence");
    CompensatedSum sum;
    const int k = static_cast<int>(prefix_.size());
    for (int i = s_max + 1; i <= k; ++i) sum += 1.0 - prefix_[i - 1];
    const int first_tail = std::max(s_max + 1, k + 1);
    sum += g->c * std::pow(g->r, first_tail) / (1.0 - g->r);
    return sum.value();
  }

  /// The sequence i -> eps_{i+1}.
  ParamSeq shift() const {
    std::vector<double> p;
    if (!prefix_.empty()) p.assign(prefix_.begin() + 1, prefix_.end());
    if (const auto *g = std::get_if<GeometricTail>(&tail_)) {
      return ParamSeq(std::move(p), GeometricTail{g->c * g->r, g->r});
    }
    return ParamSeq(std::move(p), tail_);
  }

  /// The stricter sufficient disjointness condition alpha_i, beta_i < 1/2, i.e.
  /// eps_i < 5/6, checked for i <= depth.
  bool satisfies_strict_half_bound(int depth) const {
    for (int i = 1; i <= depth; ++i) {
      if (!(eps(i) < 5.0 / 6.0)) return false;
    }
    return true;
  }

  std::string describe() const;

private:
  void check_index(int i) const {
    if (i < 1) throw DomainError("sequence index must be >= 1, got " + std::to_string(i));
  }

  std::vector<double> prefix_;
  Tail tail_;
};

inline std::string ParamSeq::describe() const {
  std::string out = "prefix=[";
  char buf[64];
  for (std::size_t k = 0; k < prefix_.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%s%.17g", k ? "," : "", prefix_[k]);
    out += buf;
  }
  out += "]";
  if (const auto *g = std::get_if<GeometricTail>(&tail_)) {
    std::snprintf(buf, sizeof buf, ";tail=exp(-%.17g*%.17g^i)", g->c, g->r);
  } else {
    std::snprintf(buf, sizeof buf, ";const=%.17g", std::get<ConstantTail>(tail_).value);
  }
  out += buf;
  return out;
}

/// Energy prefactors: a for the triangle edges, b for the cables. Harmonicity
/// of every pre-fractal forces b = a; a = 1/3 normalises tau_0 to trace 1.
struct FormConstants {
  double a = 1.0 / 3.0;
  double b = 1.0 / 3.0;

  static FormConstants harmonic(double a) { return {a, a}; }
};

} // namespace ssg

#endif // SSG_PARAMS_HPP
