#ifndef SSG_QUADRATURE_HPP
#define SSG_QUADRATURE_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "summation.hpp"

namespace ssg {

/// n-point Gauss-Legendre rule on [0,1]; exact through degree 2n-1.
class QuadratureRule {
public:
  static constexpr int kDefaultOrder = 8;

  explicit QuadratureRule(int n = kDefaultOrder) {
    if (n < 1 || n > 64) throw DomainError("quadrature order must lie in [1,64]");
    nodes_.resize(static_cast<std::size_t>(n));
    weights_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        const auto [p, dp] = legendre(n, x);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double dp = legendre(n, x).second;
      const std::size_t k = static_cast<std::size_t>(n - 1 - i);
      nodes_[k] = 0.5 * (1.0 + x);
      weights_[k] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    verify();
  }

  int order() const { return static_cast<int>(nodes_.size()); }
  int exact_degree() const { return 2 * order() - 1; }
  const std::vector<double> &nodes() const { return nodes_; }
  const std::vector<double> &weights() const { return weights_; }

  template <class F> double integrate(F &&f) const {
    CompensatedSum s;
    for (std::size_t k = 0; k < nodes_.size(); ++k) s += weights_[k] * f(nodes_[k]);
    return s.value();
  }

private:
  /// (P_n(x), P_n'(x)) by the three-term recurrence.
  static std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
  }

  void verify() const {
    for (int m = 0; m <= exact_degree(); ++m) {
      const double got = integrate([m](double t) { return std::pow(t, m); });
      const double want = 1.0 / (m + 1.0);
      if (std::abs(got - want) > 1e-14) {
        throw ConvergenceError("Gauss-Legendre rule of order " + std::to_string(order()) +
                               " fails on t^" + std::to_string(m));
      }
    }
  }

  std::vector<double> nodes_;
  std::vector<double> weights_;
};

} // namespace ssg

#endif // SSG_QUADRATURE_HPP
