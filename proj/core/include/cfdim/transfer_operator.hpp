#pragma once

#include <vector>

#include "cfdim/pressure.hpp"

namespace cfdim {

/// Truncated transfer operator
///   (L_s f)(x) = sum_{a=1}^{M} (a + x)^{-2s} f(1/(a + x)),  x in [0, 1],
/// discretized by polynomial collocation on a Chebyshev-Lobatto grid with
/// barycentric interpolation.  Everything s-independent (nodes, weights,
/// interpolation coefficients at the pulled-back points, log shifts) is
/// precomputed once, so per-s assembly is a single exp per matrix entry.
///
/// With complete_tail the digits a > M are summed too, by Euler-Maclaurin,
/// and routed through the collocation node at 0 (their branches land in
/// (0, 1/(M+1))).  That restores the s <= 1/2 divergence of the unbounded
/// alphabet and shrinks the truncation error from M^(1-2s) to about M^(-2s);
/// it requires s > 1/2.
class TransferOperator {
public:
    TransferOperator(int alphabet_max, int grid = 32, bool complete_tail = false);

    int alphabet_max() const { return alphabet_max_; }
    int grid() const { return grid_; }

    /// Leading eigenvalue lambda_M(s) by power iteration.  The kernel is
    /// positive, so the iteration converges from the constant vector; tol is
    /// relative change of the eigenvalue estimate.
    double leading_eigenvalue(double s, double rel_tol = 1e-12, int max_iter = 20000) const;

    /// ln((L_s^n 1)(0)).  The n-fold image of the constant function evaluated
    /// at 0 equals the exact depth-n branch sum sum_{|w|=n} q_n(w)^{-2s},
    /// which makes deep finite-level sums cheap.
    double iterated_endpoint_log_sum(double s, int n) const;

private:
    void assemble(double s, std::vector<double>& matrix) const;

    int alphabet_max_;
    int grid_;
    bool complete_tail_ = false;
    std::vector<double> nodes_;      // collocation points, nodes_[0] = 0
    std::vector<double> log_shift_;  // ln(a + x_j), a-major
    std::vector<double> coeff_;      // l_i(1/(a + x_j)), a-major, then j, i
};

/// One-shot leading eigenvalue of the truncated operator.
double transfer_eigenvalue(int alphabet_max, double s, int grid = 32);

/// Upper bound on the neglected digit mass sum_{a>M} a^{-2s}; infinite at
/// s <= 1/2.
double spectral_tail_bound(int alphabet_max, double s);

/// Pressure of the truncated operator: ln lambda_M(s) + h(s).
PressureEstimate pressure_spectral(const Potential& pot, int alphabet_max, int grid = 32);

}  // namespace cfdim
