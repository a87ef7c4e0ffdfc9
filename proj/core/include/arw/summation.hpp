#pragma once

#include <cmath>

namespace arw {

/// Neumaier (improved Kahan-Babuska) running sum. Works for any Real with
/// the usual arithmetic and an ADL-visible abs.
template <class Real = double>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(Real init) : sum_(init) {}

  void add(const Real& value) {
    using std::abs;
    const Real t = sum_ + value;
    if (abs(sum_) >= abs(value)) {
      comp_ += (sum_ - t) + value;
    } else {
      comp_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(const Real& value) {
    add(value);
    return *this;
  }

  CompensatedSum& operator-=(const Real& value) {
    add(-value);
    return *this;
  }

  [[nodiscard]] Real value() const { return sum_ + comp_; }

 private:
  Real sum_{0};
  Real comp_{0};
};

}  // namespace arw
