#include "cfdim/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cfdim/enumerate.hpp"
#include "cfdim/logsum.hpp"
#include "cfdim/transfer_operator.hpp"

namespace cfdim {

std::string to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::block_interior: return "block-interior";
        case NodeKind::growth_digit: return "growth-digit";
        case NodeKind::padding: return "padding";
    }
    return "?";
}

const PositionInfo& CantorConfig::at(long long position) const {
    if (position < 1 || position >= static_cast<long long>(positions.size()))
        throw Error("digit position outside the precomputed table; rebuild the config with a larger horizon");
    return positions[static_cast<std::size_t>(position)];
}

namespace {

constexpr double kLn2 = std::numbers::ln2_v<double>;

// Smallest positive integer ell with coeff * ell >= rhs.  The separation
// coefficient is (N-1)/2 * eps/2 * ln2; at N = 1 it vanishes and no block
// length can absorb a positive history term.
long long minimal_run_length(double coeff, double rhs) {
    if (rhs <= 0.0) return 1;
    if (coeff <= 0.0)
        throw Error("run-length condition unsatisfiable: block length 1 provides no separation");
    double raw = rhs / coeff;
    long long ell = static_cast<long long>(std::ceil(raw - 1e-12));
    return std::max<long long>(ell, 1);
}

// Integer digit range [ceil(c * A^n), ceil(2 c * A^n) - 1] for growth slot i
// of run k.  Empty ranges and ranges beyond 64-bit digits are refused.
void growth_digit_range(const GrowthProfile& profile, int i, int k, long long n_k,
                        long long& lo, long long& hi) {
    long double scale = static_cast<long double>(profile.c[static_cast<std::size_t>(i)]) *
                        powl(static_cast<long double>(profile.A[static_cast<std::size_t>(i)]),
                             static_cast<long double>(n_k));
    if (!(scale > 0.0L) || 2.0L * scale > 9.0e18L)
        throw OverflowError("growth digit range leaves 64 bits; lower the growth position or the base");
    lo = static_cast<long long>(ceill(scale));
    hi = static_cast<long long>(ceill(2.0L * scale)) - 1;
    if (lo < 1) lo = 1;
    if (hi < lo)
        throw DegenerateRangeError(
            "growth digit range holds no integer (base power too small against its coefficient)", i, k);
}

}  // namespace

CantorConfig build_schedule(const CantorRequest& req, long long max_level) {
    const int M = req.alphabet_max;
    const int N = req.block_len;
    CantorConfig cfg;
    cfg.request = req;
    if (cfg.request.profile.c.empty())
        cfg.request.profile.c.assign(cfg.request.profile.A.size(), 1.0);
    cfg.request.profile.validate();
    const int m = cfg.request.profile.m();
    if (M < 2) throw Error("alphabet bound must be at least 2");
    if (N < 1) throw Error("block length must be at least 1");
    if (!(req.eps > 0.0)) throw Error("eps must be positive");
    if (req.mode == CantorMode::strict && req.blocks < 1)
        throw Error("strict mode needs at least one growth block");
    if (req.mode == CantorMode::padded && req.n_k.empty())
        throw Error("padded mode needs explicit growth positions");

    CantorSchedule& sched = cfg.schedule;

    // Block-length threshold (2^{(N-1)/2})^{eps/2} >= C, reported always and
    // enforced only on request: desk-scale runs use small C on purpose.
    const double log_C = std::log(std::max(req.threshold_C, 1.0));
    sched.threshold_min_N =
        static_cast<long long>(std::ceil(1.0 + 4.0 * log_C / (req.eps * kLn2) - 1e-12));
    sched.threshold_min_N = std::max<long long>(sched.threshold_min_N, 1);
    sched.threshold_ok = static_cast<double>(N - 1) * req.eps * kLn2 / 4.0 >= log_C - 1e-12;
    if (req.enforce_threshold && !sched.threshold_ok)
        throw ThresholdError("block length below the separation threshold", sched.threshold_min_N);

    const double log_beta_last = std::log(cfg.request.profile.beta(m - 1));

    if (req.mode == CantorMode::strict) {
        // Run k must be long enough that one block's worth of separation
        // dominates everything placed before it:
        //   ell_k (N-1)/2 * eps/2 * ln2 >= sum_{t<k} [ ell_t N ln(M+1)
        //                                  + (sum_{i<=t} ell_i N + t) ln beta ].
        const double coeff = static_cast<double>(N - 1) * 0.5 * req.eps * 0.5 * kLn2;
        double rhs = 0.0;
        long long cum_len = 0;
        long long prev_n = 0;
        for (int k = 1; k <= req.blocks; ++k) {
            long long ell = minimal_run_length(coeff, rhs);
            sched.ell.push_back(ell);
            long long start = (k == 1) ? 1 : prev_n + m;
            sched.run_start.push_back(start);
            sched.run_end.push_back(start + ell * N - 1);
            long long n_k = (k == 1) ? ell * N + 1 : prev_n + m + ell * N;
            sched.n_k.push_back(n_k);
            prev_n = n_k;
            cum_len += ell * N;
            rhs += static_cast<double>(ell) * N * std::log(static_cast<double>(M) + 1.0) +
                   static_cast<double>(cum_len + k) * log_beta_last;
        }
    } else {
        long long prev_n = 0;
        for (std::size_t k = 1; k <= req.n_k.size(); ++k) {
            long long n_k = req.n_k[k - 1];
            long long start = (k == 1) ? 1 : prev_n + m;
            long long gap = n_k - start;
            if (gap < N - 1)
                throw Error("growth position " + std::to_string(n_k) +
                            " leaves no room for a padded block run (need a gap of at least N-1)");
            long long ell = (gap - (N - 1)) / N;
            sched.ell.push_back(ell);
            sched.run_start.push_back(start);
            sched.run_end.push_back(start + ell * N - 1);
            sched.n_k.push_back(n_k);
            prev_n = n_k;
        }
        cfg.request.blocks = static_cast<int>(req.n_k.size());
    }

    const int K = static_cast<int>(sched.n_k.size());
    // The tail run: plain block positions past the last growth digit.
    sched.run_start.push_back(sched.n_k.back() + m);

    long long horizon = max_level > 0 ? max_level : sched.n_k.front() + m + N;
    cfg.max_level = horizon;
    sched.run_end.push_back(std::max(horizon + 1, sched.run_start.back() - 1));

    // Per-position classification, one entry past the horizon so every node
    // up to max_level knows its branching.
    cfg.positions.assign(static_cast<std::size_t>(horizon) + 2, PositionInfo{});
    for (int k = 1; k <= K + 1; ++k) {
        long long start = sched.run_start[static_cast<std::size_t>(k - 1)];
        long long end = sched.run_end[static_cast<std::size_t>(k - 1)];
        for (long long p = start; p <= std::min(end, horizon + 1); ++p) {
            PositionInfo& info = cfg.positions[static_cast<std::size_t>(p)];
            info.kind = NodeKind::block_interior;
            info.run = k;
            info.run_word_end = (p - start + 1) % N == 0;
            info.digit_lo = 1;
            info.digit_hi = M;
        }
        if (k > K) break;
        long long n_k = sched.n_k[static_cast<std::size_t>(k - 1)];
        for (long long p = end + 1; p <= std::min(n_k - 1, horizon + 1); ++p) {
            PositionInfo& info = cfg.positions[static_cast<std::size_t>(p)];
            info.kind = NodeKind::padding;
            info.run = k;
            info.digit_lo = 2;
            info.digit_hi = 2;
        }
        for (int i = 0; i < m; ++i) {
            long long p = n_k + i;
            if (p > horizon + 1) break;
            PositionInfo& info = cfg.positions[static_cast<std::size_t>(p)];
            info.kind = NodeKind::growth_digit;
            info.growth_index = i;
            info.run = k;
            growth_digit_range(cfg.request.profile, i, k, n_k, info.digit_lo, info.digit_hi);
        }
    }

    // Block exponents and the log of the raw weight sum they normalize.  The
    // exponents make sum_w beta_{j-1}^N / (q_N(w)^2 (beta_j beta_{j-1})^N)^d
    // equal one, so each log_norm entry measures how far the root solve got.
    ApproximantOptions aopt;
    aopt.tol = req.approximant_tol;
    aopt.budget = req.budget;
    cfg.d = block_exponents(cfg.request.profile, N, M, aopt);

    cfg.log_norm.resize(static_cast<std::size_t>(m));
    std::uint64_t words = word_count(static_cast<std::uint64_t>(M), N);
    bool enumerable = words <= std::min<std::uint64_t>(req.budget.max_nodes, std::uint64_t{1} << 21);
    std::vector<double> log_qsum(static_cast<std::size_t>(m));
    if (enumerable) {
        std::vector<KahanSum> acc(static_cast<std::size_t>(m));
        walk_words_u64(M, N, [&](const std::uint64_t*, int level, ContinuantPair64 st) {
            if (level != N) return;
            double lq = std::log(static_cast<double>(st.q));
            for (int j = 0; j < m; ++j)
                acc[static_cast<std::size_t>(j)].add(std::exp(-2.0 * cfg.d[static_cast<std::size_t>(j)] * lq));
        });
        for (int j = 0; j < m; ++j) log_qsum[static_cast<std::size_t>(j)] = std::log(acc[static_cast<std::size_t>(j)].value());
    } else {
        TransferOperator op(M, aopt.grid);
        for (int j = 0; j < m; ++j)
            log_qsum[static_cast<std::size_t>(j)] = op.iterated_endpoint_log_sum(cfg.d[static_cast<std::size_t>(j)], N);
    }
    for (int j = 0; j < m; ++j) {
        double log_b1 = std::log(cfg.request.profile.beta(j));
        double log_b2 = std::log(cfg.request.profile.beta(j - 1));
        cfg.log_norm[static_cast<std::size_t>(j)] =
            N * log_b2 - cfg.d[static_cast<std::size_t>(j)] * N * (log_b1 + log_b2) + log_qsum[static_cast<std::size_t>(j)];
    }

    return cfg;
}

}  // namespace cfdim
