#pragma once

#include <cstddef>
#include <vector>

namespace cfdim {

/// A finite growth profile: digit number n_k + i must lie in
/// [c_i A_i^{n_k}, 2 c_i A_i^{n_k}) for i = 0..m-1.  beta_i = A_0 * ... * A_i
/// are the cumulative products that drive continuant growth across the block.
struct GrowthProfile {
    std::vector<double> A;  // bases, each > 1
    std::vector<double> c;  // leading constants, each > 0

    int m() const { return static_cast<int>(A.size()); }
    /// beta_i; i = -1 gives 1.
    double beta(int i) const;
    /// Validates shapes and ranges, throws Error on bad input.
    void validate() const;
};

}  // namespace cfdim
