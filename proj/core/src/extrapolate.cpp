#include "cfdim/extrapolate.hpp"

#include <cmath>

namespace cfdim {

double aitken_step(double a, double b, double c) {
    double d1 = b - a;
    double d2 = c - b;
    double denom = d2 - d1;
    // Guard against cancellation once the sequence has settled.
    if (std::abs(denom) < 1e-14 * (std::abs(d1) + std::abs(d2) + 1e-300)) return c;
    double out = c - d2 * d2 / denom;
    return std::isfinite(out) ? out : c;
}

double aitken_last(const std::vector<double>& xs) {
    if (xs.size() < 3) return xs.empty() ? 0.0 : xs.back();
    std::size_t n = xs.size();
    return aitken_step(xs[n - 3], xs[n - 2], xs[n - 1]);
}

double richardson_last(const std::vector<double>& xs, double ratio) {
    if (xs.size() < 2) return xs.empty() ? 0.0 : xs.back();
    if (!(ratio > 0.0) || ratio >= 1.0) return xs.back();
    std::size_t n = xs.size();
    return (xs[n - 1] - ratio * xs[n - 2]) / (1.0 - ratio);
}

}  // namespace cfdim
