#pragma once

#include <cstddef>

namespace barrenlab {

/// Compensated (Kahan) accumulator. Long sums over p or p^2 terms drift at
/// the 1e-11 level with plain doubles; this keeps them near machine epsilon.
class KahanSum {
public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }

    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <typename It>
double kahan_total(It first, It last) {
    KahanSum s;
    for (; first != last; ++first) s.add(*first);
    return s.value();
}

}  // namespace barrenlab
