#pragma once

#include <cmath>

namespace rtquad {

// Neumaier's variant of Kahan summation. The running error term captures the
// low-order bits lost by each addition, so long sums of mixed-sign terms keep
// close to full precision.
class CompensatedSum {
public:
    constexpr CompensatedSum() = default;
    constexpr explicit CompensatedSum(double initial) : sum_(initial) {}

    CompensatedSum& add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    CompensatedSum& add(const CompensatedSum& other) {
        add(other.sum_);
        comp_ += other.comp_;
        return *this;
    }

    CompensatedSum& operator+=(double x) { return add(x); }

    [[nodiscard]] double value() const { return sum_ + comp_; }
    [[nodiscard]] double head() const { return sum_; }
    [[nodiscard]] double tail() const { return comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace rtquad
