#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace cfdim {

/// Compensated accumulator.  Deterministic for a fixed add order.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

/// ln(sum_i exp(x[i])) with max shift.  Empty input gives -inf.
inline double log_sum_exp(std::span<const double> xs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : xs)
        if (x > m) m = x;
    if (!std::isfinite(m)) return m;
    KahanSum acc;
    for (double x : xs) acc.add(std::exp(x - m));
    return m + std::log(acc.value());
}

/// Streaming ln-sum-exp: rescales on the fly so any magnitude mix is safe.
struct OnlineLogSumExp {
    double shift = -std::numeric_limits<double>::infinity();
    KahanSum acc;

    void add(double log_term) {
        if (log_term == -std::numeric_limits<double>::infinity()) return;
        if (log_term > shift) {
            double old = acc.value();
            if (old > 0.0) {
                acc = KahanSum{};
                acc.add(old * std::exp(shift - log_term));
            }
            shift = log_term;
        }
        acc.add(std::exp(log_term - shift));
    }
    double value() const {
        if (!std::isfinite(shift)) return shift;
        return shift + std::log(acc.value());
    }
};

}  // namespace cfdim
