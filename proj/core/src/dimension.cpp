#include "cfdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cfdim/enumerate.hpp"
#include "cfdim/logsum.hpp"

namespace cfdim {

double GrowthProfile::beta(int i) const {
    if (i < -1 || i >= m()) throw Error("GrowthProfile::beta: index out of range");
    double b = 1.0;
    for (int k = 0; k <= i; ++k) b *= A[static_cast<std::size_t>(k)];
    return b;
}

void GrowthProfile::validate() const {
    if (A.empty()) throw Error("growth profile: at least one base required");
    if (c.size() != A.size()) throw Error("growth profile: A and c must have equal length");
    for (double a : A)
        if (!(a > 1.0)) throw Error("growth profile: every base must exceed 1");
    for (double ci : c)
        if (!(ci > 0.0)) throw Error("growth profile: every constant must be positive");
}

namespace {

struct BisectOut {
    double value;
    double lo, hi;
    double residual;
    RootStatus status;
    double end_lo;  // pressure at the original bracket ends
    double end_hi;
};

// Root of a decreasing function: f > 0 left of the root, f < 0 right of it.
// A nonpositive left end or a positive right end has no sign change and comes
// back flagged instead; callers that treat one side as a hard error convert.
template <class F>
BisectOut bisect_decreasing(F&& f, double lo, double hi, double tol, int max_iter) {
    double f_lo = f(lo);
    if (f_lo <= 0.0) return {lo, lo, hi, f_lo, RootStatus::boundary_low, f_lo, 0.0};
    double f_hi = f(hi);
    if (f_hi > 0.0) return {hi, lo, hi, f_hi, RootStatus::boundary_high, f_lo, f_hi};
    const double end_lo = f_lo, end_hi = f_hi;
    for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double value = 0.5 * (lo + hi);
    return {value, lo, hi, f(value), RootStatus::interior, end_lo, end_hi};
}

}  // namespace

DimensionResult solve_root(const Offset& h, const SolveOptions& opt) {
    if (opt.alphabet_ladder.empty()) throw Error("solve_root: empty alphabet ladder");
    for (std::size_t i = 1; i < opt.alphabet_ladder.size(); ++i)
        if (opt.alphabet_ladder[i] <= opt.alphabet_ladder[i - 1])
            throw Error("solve_root: alphabet ladder must be strictly increasing");

    DimensionResult out;
    BisectOut last{};
    for (int M : opt.alphabet_ladder) {
        BisectOut rung{};
        if (opt.engine == EngineKind::spectral) {
            // Tail completion keeps the s <= 1/2 divergence, so the left
            // bracket end is always on the positive side of the root.
            TransferOperator op(M, opt.grid, true);
            auto f = [&](double s) { return std::log(op.leading_eigenvalue(s)) + h(s); };
            rung = bisect_decreasing(f, opt.bracket_lo, opt.bracket_hi, opt.tol, opt.max_iter);
        } else {
            PressureDirectOptions popt;
            popt.sums.budget = opt.budget;
            auto f = [&](double s) {
                return pressure_direct(Potential{s, h}, M, opt.direct_depth, popt).value;
            };
            rung = bisect_decreasing(f, opt.bracket_lo, opt.bracket_hi, opt.tol, opt.max_iter);
        }
        if (rung.status == RootStatus::boundary_high)
            throw BracketError("solve_root: pressure still positive at the right bracket end",
                               rung.end_lo, rung.end_hi);
        out.rung_M.push_back(M);
        out.rungs.push_back(rung.value);
        last = rung;
    }

    out.value = out.rungs.back();
    out.bracket_lo = last.lo;
    out.bracket_hi = last.hi;
    out.residual = last.residual;
    out.status = last.status;

    const std::size_t n = out.rungs.size();
    if (opt.extrapolate == Extrapolation::aitken && n >= 3) {
        out.value = aitken_last(out.rungs);
        out.extrapolated = true;
    } else if (opt.extrapolate == Extrapolation::richardson && n >= 2) {
        // With s at the last rung the consecutive-rung error ratio is known
        // and one step cancels it: tail-completed spectral rungs err like
        // M^(-2s), raw direct sums like M^(1-2s).
        double s_last = out.rungs[n - 1];
        double growth = static_cast<double>(out.rung_M[n - 1]) / out.rung_M[n - 2];
        double expo = opt.engine == EngineKind::spectral ? -2.0 * s_last : 1.0 - 2.0 * s_last;
        double ratio = std::pow(growth, expo);
        if (ratio < 0.98) {
            out.value = richardson_last(out.rungs, ratio);
            out.extrapolated = true;
        } else if (n >= 3) {
            out.value = aitken_last(out.rungs);
            out.extrapolated = true;
        }
    }
    out.tail_bound = spectral_tail_bound(out.rung_M.back(), out.value);
    return out;
}

namespace {

DimensionResult full_measure_result() {
    DimensionResult out;
    out.value = 1.0;
    out.bracket_lo = 1.0;
    out.bracket_hi = 1.0;
    out.status = RootStatus::interior;
    return out;
}

}  // namespace

DimensionResult dim_single(double B, const SolveOptions& opt) {
    if (!(B >= 1.0)) throw Error("dim_single: B must be >= 1");
    if (B == 1.0) return full_measure_result();
    return solve_root(offset_single(B), opt);
}

DimensionResult dim_two_param(double B1, double B2, const SolveOptions& opt) {
    if (!(B2 >= 1.0) || !(B1 >= B2)) throw Error("dim_two_param: need B1 >= B2 >= 1");
    if (B1 == 1.0) return full_measure_result();
    return solve_root(offset_two_param(B1, B2), opt);
}

ProfileDimensions profile_dimensions(const GrowthProfile& profile, const SolveOptions& opt) {
    profile.validate();
    ProfileDimensions out;
    for (int j = 0; j < profile.m(); ++j) {
        // Component windows need no emptiness constraint; the offsets are
        // meaningful for any beta_j > beta_{j-1} >= 1.
        out.d.push_back(solve_root(offset_two_param(profile.beta(j), profile.beta(j - 1)), opt));
    }
    out.argmin = 0;
    for (int j = 1; j < profile.m(); ++j)
        if (out.d[static_cast<std::size_t>(j)].value < out.d[static_cast<std::size_t>(out.argmin)].value)
            out.argmin = j;
    out.min_value = out.d[static_cast<std::size_t>(out.argmin)].value;
    return out;
}

namespace {

// ln sum_i exp(c * logq[i]) with a one-sided shift; c of either sign.
double scaled_log_sum(const std::vector<double>& log_q, double c, double lq_min, double lq_max) {
    double shift = c >= 0.0 ? c * lq_max : c * lq_min;
    KahanSum acc;
    for (double lq : log_q) acc.add(std::exp(c * lq - shift));
    return shift + std::log(acc.value());
}

}  // namespace

DimensionResult finite_root(int alphabet_max, int depth, double B1, double B2,
                            const ApproximantOptions& opt) {
    if (alphabet_max < 1) throw InvalidDigitError("alphabet_max must be >= 1");
    if (depth < 1) throw Error("finite_root: depth must be >= 1");
    if (!(B1 > 0.0) || !(B2 > 0.0)) throw Error("finite_root: parameters must be positive");

    const double n_log_b1 = depth * std::log(B1);
    const double n_log_b2 = depth * std::log(B2);

    // Equation G(d) = ln sum_w B2^{(1-d) depth} (B1^depth q_w^2)^{-d}; G is
    // strictly decreasing.  Small word sets are enumerated exactly; past the
    // threshold the iterated-operator identity gives the same branch sum.
    constexpr std::uint64_t vector_cap = std::uint64_t{1} << 21;
    std::uint64_t words = word_count(static_cast<std::uint64_t>(alphabet_max), depth);
    bool enumerate = opt.force_enumeration || words <= std::min(vector_cap, opt.budget.max_nodes);

    DimensionResult out;
    BisectOut root{};
    if (enumerate) {
        check_budget(static_cast<std::uint64_t>(alphabet_max), depth, opt.budget, "finite_root");
        std::vector<double> log_q;
        log_q.reserve(static_cast<std::size_t>(words));
        walk_words_u64(alphabet_max, depth, [&](const std::uint64_t*, int level, ContinuantPair64 st) {
            if (level == depth) log_q.push_back(std::log(static_cast<double>(st.q)));
        });
        double lq_min = *std::min_element(log_q.begin(), log_q.end());
        double lq_max = *std::max_element(log_q.begin(), log_q.end());
        auto G = [&](double d) {
            return -d * n_log_b1 + (1.0 - d) * n_log_b2 +
                   scaled_log_sum(log_q, -2.0 * d, lq_min, lq_max);
        };
        root = bisect_decreasing(G, 0.0, 2.0, opt.tol, 400);
    } else {
        TransferOperator op(alphabet_max, opt.grid);
        auto G = [&](double d) {
            return -d * n_log_b1 + (1.0 - d) * n_log_b2 + op.iterated_endpoint_log_sum(d, depth);
        };
        root = bisect_decreasing(G, 0.0, 2.0, opt.tol, 400);
    }

    out.value = root.value;
    out.bracket_lo = root.lo;
    out.bracket_hi = root.hi;
    out.residual = root.residual;
    out.status = root.status;
    out.rung_M = {alphabet_max};
    out.rungs = {root.value};
    return out;
}

std::vector<double> block_exponents(const GrowthProfile& profile, int block_len, int alphabet_max,
                                    const ApproximantOptions& opt) {
    profile.validate();
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(profile.m()));
    for (int j = 0; j < profile.m(); ++j)
        d.push_back(finite_root(alphabet_max, block_len, profile.beta(j), profile.beta(j - 1), opt).value);
    return d;
}

}  // namespace cfdim
