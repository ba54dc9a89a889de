#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace bridgesift {

// Neumaier-compensated accumulator. The running error stays O(eps * sum |x|)
// independent of the number of terms, which is what the terminal-cancellation
// and zero-sum tolerances of the recovery schemes assume.
class KahanSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    KahanSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

} // namespace bridgesift
