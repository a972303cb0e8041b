#pragma once

#include <vector>

namespace cfdim {

/// How to compress a ladder of estimates into one value.
enum class Extrapolation {
    last_rung,   // trust the largest computed rung
    aitken,      // Aitken delta-squared on the last three rungs
    richardson,  // cancel a known geometric error ratio using the last two
};

/// Aitken delta-squared applied to (a, b, c).  Falls back to c when the
/// denominator underflows (already-converged sequences).
double aitken_step(double a, double b, double c);

/// Aitken on the last three entries; passes shorter inputs through.
double aitken_last(const std::vector<double>& xs);

/// Richardson step on the last two entries assuming error(k+1) ~ ratio * error(k):
/// x* = (x_last - ratio * x_prev) / (1 - ratio).
double richardson_last(const std::vector<double>& xs, double ratio);

}  // namespace cfdim
