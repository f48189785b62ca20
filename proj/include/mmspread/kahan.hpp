#pragma once

#include <cmath>

namespace mmspread {

// Neumaier-compensated accumulator. Error stays bounded regardless of how
// many terms are folded in, which matters for multi-month interval sums.
class KahanSum {
  public:
    KahanSum() = default;
    explicit KahanSum(double initial) : sum_(initial) {}

    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

    KahanSum& operator+=(double x) {
        add(x);
        return *this;
    }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace mmspread
