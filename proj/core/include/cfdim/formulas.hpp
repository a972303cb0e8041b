#pragma once

#include <optional>
#include <vector>

#include "cfdim/dimension.hpp"
#include "cfdim/growth_profile.hpp"

namespace cfdim {

/// f_1(s) = s,  f_{k+1}(s) = s f_k(s) / (1 - s + f_k(s)).  Governs the
/// m-fold product family; f_2(s) = s^2 identically.
double f_m(int m, double s);

/// Threshold exponent, evaluated in the cancellation-free form
///   theta_m(t) = t * sum_{i<m-1} t^i (1-t)^{m-2-i} / sum_{i<m} t^i (1-t)^{m-1-i},
/// which is the raw quotient (t^m - t(1-t)^{m-1}) / (t^m - (1-t)^m) with the
/// removable (2t - 1) factor cancelled analytically.  theta_2(t) = t;
/// theta_m(1/2) = (m-1)/m.
double theta_m(int m, double t);

/// Exponents e_i, summing to 1 exactly, that split ln B across an m-digit
/// block so every component dimension agrees: e_i proportional to
/// t^{m-1-i} (1-t)^i.  Requires t > 1/2.
std::vector<double> equalizing_exponents(int m, double t);

/// Profile with A_i = B^{e_i} at the given t and unit constants; the bases
/// then satisfy the chain A_k = A_0^{((1-t)/t)^k}.
GrowthProfile equalizing_profile(double B, int m, double t);

/// Same, with t solved internally as the product-family dimension of (B, m).
GrowthProfile equalizing_profile(double B, int m, const SolveOptions& opt = {});

/// Weighted two-exponent formula
///   f_{t0,t1}(s) = s (s/t0) / ( t1 [ s/t0 + max{0, s/t1 - (2s-1)/t0} ] );
/// f_{1,1} = s^2.
double weighted_f(double t0, double t1, double s);

/// Sign of the max-term switch in weighted_f: s/t1 - (2s-1)/t0.
double weighted_regime(double t0, double t1, double s);

/// Root of P(s) + h(s) = 0 with h(s) = -f_m(s) ln B: the m-fold product
/// family.  Requires B > 1, m >= 1; m = 1 coincides with dim_single.
DimensionResult product_dimension(double B, int m, const SolveOptions& opt = {});

/// Root with h(s) = -f_{t0,t1}(s) ln B.  Requires B > 1, t0 >= t1 > 0.
DimensionResult weighted_dimension(double B, double t0, double t1, const SolveOptions& opt = {});

/// Dimension 1/(1 + b) of the doubly exponential family; requires b > 1.
double doubly_exponential_dim(double b);

/// Root with h(s) = -(3s - 1) ln B: products of three consecutive digits at
/// scale B^n.  Requires B >= 1; B = 1 is the full-measure case (returns 1).
/// The potential coincides bit-for-bit with offset_two_param(B^2, B).
DimensionResult triple_product_dimension(double B, const SolveOptions& opt = {});

// -- window classification ----------------------------------------------------

enum class FmCase {
    empty,     // B2 <= sqrt(B1): the two growth conditions contradict
    g_regime,  // sqrt(B1) < B2 < B1^theta: dimension is the two-parameter root
    t_regime   // B2 >= B1^theta: dimension is the product-family root
};

/// One eventual inequality margin(n) = slope * n + intercept >= 0.
struct LinearCheck {
    double slope = 0.0;
    double intercept = 0.0;
    bool eventually = false;     // holds for all large n
    long long satisfied_from = 0;  // minimal n >= 1 with margin(n) >= 0 (0 if never)
};

struct FmClassification {
    FmCase regime = FmCase::empty;
    bool boundary = false;  // within tolerance of a regime threshold
    double t = 0.0;         // product-family root of B1
    double theta = 0.0;     // theta_m(t)
    double log_threshold = 0.0;  // theta * ln B1, compared against ln B2
    std::optional<double> dimension;
    std::optional<double> t_dimension;  // boundary: value on the t side
    std::optional<double> g_dimension;  // boundary: value on the g side
    std::optional<GrowthProfile> witness;
    std::vector<LinearCheck> witness_checks;  // the three subset inequalities
};

struct ClassifyOptions {
    SolveOptions solve{};
    double boundary_rel_tol = 1e-6;  // relative, on ln B2 against the thresholds
};

/// Decides the regime of the (B1, B2, m) window, computes its dimension, and
/// in the nonempty regimes builds the admissible witness profile with the
/// published constants, plus the three log-linear inequalities certifying
/// that the witness set embeds in the window.  Requires B1, B2 > 1, m >= 2.
FmClassification classify_window(double B1, double B2, int m, const ClassifyOptions& opt = {});

}  // namespace cfdim
