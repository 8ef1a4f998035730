#pragma once

#include <cmath>

namespace qgauss {

/// Kahan-Neumaier compensated accumulator; term counts in the moment sums
/// reach 1e5+ and plain summation loses digits there.
class KahanSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace qgauss
