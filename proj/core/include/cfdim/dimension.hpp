#pragma once

#include <optional>
#include <vector>

#include "cfdim/growth_profile.hpp"
#include "cfdim/pressure.hpp"
#include "cfdim/transfer_operator.hpp"

namespace cfdim {

enum class RootStatus {
    interior,      // sign change inside the bracket
    boundary_low,  // pressure already <= 0 at the left end
    boundary_high  // pressure still > 0 at the right end
};

enum class EngineKind { spectral, direct };

struct DimensionResult {
    double value = 0.0;
    double bracket_lo = 0.0;  // final bisection bracket
    double bracket_hi = 0.0;
    RootStatus status = RootStatus::interior;
    double residual = 0.0;            // pressure at the returned point
    std::vector<int> rung_M;          // alphabet ladder actually used
    std::vector<double> rungs;        // root per rung
    bool extrapolated = false;
    double tail_bound = 0.0;          // truncation bound at the last rung
};

struct SolveOptions {
    EngineKind engine = EngineKind::spectral;
    std::vector<int> alphabet_ladder = {50, 100, 200};
    int grid = 32;              // spectral collocation size
    int direct_depth = 8;       // direct-engine word length
    Extrapolation extrapolate = Extrapolation::last_rung;
    double tol = 1e-8;  // bisection width on s
    int max_iter = 100;
    // Families over the full digit alphabet live on s > 1/2 (the pressure
    // diverges below).  Spectral rungs complete the neglected digit tail and
    // inherit that divergence, so the left end always brackets; the direct
    // engine sums raw truncations and can come back boundary-flagged.
    double bracket_lo = 0.5 + 1e-6;
    double bracket_hi = 1.5;
    EnumerationBudget budget{};
};

/// Finds s with P_M(s) + h(s) = 0 for each rung M of the ladder, then
/// combines the rungs per opt.extrapolate (RootStatus refers to the last
/// rung).  Spectral rungs are tail-completed, so they approach the
/// unbounded-alphabet root at M^(-2s) speed instead of truncation speed.
DimensionResult solve_root(const Offset& h, const SolveOptions& opt = {});

/// Hausdorff dimension of the level set with q_n^2 ~ B^n.  Requires B >= 1;
/// B = 1 is the full-measure case and returns 1 exactly.
DimensionResult dim_single(double B, const SolveOptions& opt = {});

/// Dimension for the two-parameter potential -s ln B1 + (1 - s) ln B2.
/// Requires 1 <= B2 <= B1; B2 = 1 reduces to dim_single(B1) exactly.
DimensionResult dim_two_param(double B1, double B2, const SolveOptions& opt = {});

struct ProfileDimensions {
    std::vector<DimensionResult> d;  // indexed 0..m-1
    int argmin = 0;
    double min_value = 0.0;
};

/// The m component dimensions of a growth profile: entry j solves the
/// two-parameter problem with B1 = beta_j, B2 = beta_{j-1}.
ProfileDimensions profile_dimensions(const GrowthProfile& profile, const SolveOptions& opt = {});

// -- finite approximants ----------------------------------------------------

struct ApproximantOptions {
    double tol = 1e-13;
    EnumerationBudget budget{};
    /// Word enumeration is exact but exponential; past the budget the
    /// equivalent operator-iterate path takes over unless pinned here.
    bool force_enumeration = false;
    int grid = 48;
};

/// Root d of  sum_{|w|=depth, digits <= M} B2^{(1-d) depth} (B1^depth q_w^2)^{-d} = 1,
/// bracketed on [0, 2].  B2 = 1 gives the single-parameter approximant.
DimensionResult finite_root(int alphabet_max, int depth, double B1, double B2,
                            const ApproximantOptions& opt = {});

/// Block exponents bold-d_j of a growth profile at block length N:
/// finite_root with B1 = beta_j, B2 = beta_{j-1}.
std::vector<double> block_exponents(const GrowthProfile& profile, int block_len, int alphabet_max,
                                    const ApproximantOptions& opt = {});

}  // namespace cfdim
