#ifndef SSG_SUMMATION_HPP
#define SSG_SUMMATION_HPP

#include <cmath>

namespace ssg {

/// Neumaier-compensated running sum. Callers feed terms in canonical order.
class CompensatedSum {
public:
  constexpr CompensatedSum &add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  constexpr CompensatedSum &operator+=(double x) { return add(x); }
  constexpr double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

} // namespace ssg

#endif // SSG_SUMMATION_HPP
