#pragma once

#include <cmath>

namespace magdiv {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  CompensatedSum &operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const { return sum_ + comp_; }
  explicit operator double() const { return value(); }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace magdiv
