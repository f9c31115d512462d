#pragma once

#include <cmath>

#ifdef __FAST_MATH__
#error fast math would defeat the compensated accumulation used for determinism
#endif

namespace ccrit {

/// Neumaier-compensated accumulator. All multi-term sums in this library are
/// reduced through one of these in a fixed iteration order, so identical
/// inputs give bit-identical results regardless of build or thread count.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

} // namespace ccrit
