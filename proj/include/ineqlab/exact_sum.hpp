#pragma once

#include <cmath>
#include <vector>

namespace ineqlab {

// Shewchuk's partials summation; value() is the correctly rounded exact sum.
// Replicating every term 2^k times scales the result by exactly 2^k, which
// keeps quadrature invariant under tiling and refinement.
class ExactSum {
public:
    void add(double x) {
        std::size_t i = 0;
        for (double y : partials_) {
            if (std::abs(x) < std::abs(y)) std::swap(x, y);
            double hi = x + y;
            double lo = y - (hi - x);
            if (lo != 0.0) partials_[i++] = lo;
            x = hi;
        }
        partials_.resize(i);
        partials_.push_back(x);
    }

    double value() const {
        if (partials_.empty()) return 0.0;
        std::size_t n = partials_.size();
        double hi = partials_[--n];
        double lo = 0.0;
        while (n > 0) {
            double x = hi;
            double y = partials_[--n];
            hi = x + y;
            double yr = hi - x;
            lo = y - yr;
            if (lo != 0.0) break;
        }
        // half-way correction, as in math.fsum
        if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
            double y = lo * 2.0;
            double x = hi + y;
            if (y == x - hi) hi = x;
        }
        return hi;
    }

private:
    std::vector<double> partials_;
};

template <class Range>
double exact_sum(const Range& r) {
    ExactSum s;
    for (double x : r) s.add(x);
    return s.value();
}

}  // namespace ineqlab
