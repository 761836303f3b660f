#pragma once

#include <cmath>
#include <span>

namespace mzlaw::detail {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_mean(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) {
        s.add(x);
    }
    return s.value() / static_cast<double>(xs.size());
}

}  // namespace mzlaw::detail
