#pragma once

#include <cmath>

namespace wmwplan::detail {

// Neumaier-compensated running sum. Sums of half-integers (midranks) stay
// exact well past 2^53 / 4 in total magnitude, and squared deviations keep
// full double accuracy for pooled sizes around 1e7.
class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  NeumaierSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace wmwplan::detail
