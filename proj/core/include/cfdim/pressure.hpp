#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "cfdim/enumerate.hpp"
#include "cfdim/extrapolate.hpp"

namespace cfdim {

/// The digit-independent additive term h(s) of the potential
/// psi_s = -s log|T'| + h(s).  Affine offsets h(s) = alpha * s + beta cover
/// every built-in family; custom offsets take a callable.
class Offset {
public:
    Offset() = default;
    static Offset affine(double alpha, double beta);
    static Offset custom(std::function<double(double)> fn);

    double operator()(double s) const { return affine_ ? alpha_ * s + beta_ : fn_(s); }
    bool is_affine() const { return affine_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

private:
    bool affine_ = true;
    double alpha_ = 0.0;
    double beta_ = 0.0;
    std::function<double(double)> fn_;
};

/// h(s) = -s ln B: level sets with q_n^2 ~ B^n.
Offset offset_single(double B);

/// h(s) = -s ln B1 + (1 - s) ln B2: two-sided growth window.
Offset offset_two_param(double B1, double B2);

/// The potential at a given exponent.
struct Potential {
    double s = 0.5;
    Offset h;
};

enum class PressureMethod { direct_sum, spectral };

struct PressureEstimate {
    double value = 0.0;  // pressure estimate, offset included
    PressureMethod method = PressureMethod::direct_sum;
    int alphabet_max = 0;
    int depth = 0;               // direct: deepest ladder rung
    int grid = 0;                // spectral: collocation size
    double tail_bound = 0.0;     // truncation bound on the neglected digits
    std::vector<double> ladder;  // per-rung values (direct: (1/k) core_k + h)
    std::vector<double> diffs;   // successive core differences + h (direct)
    bool extrapolated = false;
};

struct DirectSumOptions {
    EnumerationBudget budget{};
    double anchor = 0.0;  // y in [0,1): weights (q_k + y * q_{k-1})^{-2s}
};

/// Core log-sums ln sum_{|w|=k} (q_k + y q_{k-1})^{-2s} for k = 1..depth and
/// every requested s, in one lexicographic pass over the word tree.
/// out[j][k-1] is the depth-k sum for s_values[j].
std::vector<std::vector<double>> direct_log_core_sums(int alphabet_max, int depth,
                                                      const std::vector<double>& s_values,
                                                      const DirectSumOptions& opt = {});

struct PressureDirectOptions {
    int depth_min = 2;  // first rung used by the difference ladder
    Extrapolation extrapolate = Extrapolation::aitken;
    DirectSumOptions sums{};
};

/// Finite-alphabet pressure by direct summation.  The ladder holds the naive
/// (1/k)-normalized values; the difference sequence core_k - core_{k-1}
/// converges geometrically and is what the estimate is taken from.
PressureEstimate pressure_direct(const Potential& pot, int alphabet_max, int depth,
                                 const PressureDirectOptions& opt = {});

}  // namespace cfdim
