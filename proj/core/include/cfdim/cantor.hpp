#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cfdim/continuants.hpp"
#include "cfdim/dimension.hpp"
#include "cfdim/growth_profile.hpp"

namespace cfdim {

enum class CantorMode {
    strict,  // growth blocks packed as tightly as the sparsity condition allows
    padded   // growth blocks at caller-chosen positions, gaps padded with 2s
};

struct CantorRequest {
    int alphabet_max = 3;  // block digits range over [1, alphabet_max]
    int block_len = 2;     // N
    GrowthProfile profile;
    double eps = 1.0;
    int blocks = 1;                   // K, strict mode
    CantorMode mode = CantorMode::strict;
    std::vector<long long> n_k;       // padded mode: explicit growth positions
    double threshold_C = 16.0;        // block-length threshold constant
    bool enforce_threshold = false;   // throw ThresholdError when violated
    double approximant_tol = 1e-13;
    EnumerationBudget budget{};
    int max_exact_bits = 4096;        // guard on continuant magnitude
};

/// Where every digit position lives.  Block runs come in K+1 groups: run k
/// holds ell_k words of length N; run K+1 extends past the last growth block
/// indefinitely.  1-based positions.
struct CantorSchedule {
    std::vector<long long> ell;        // ell_1 .. ell_K
    std::vector<long long> n_k;        // n_1 .. n_K
    std::vector<long long> run_start;  // first block position of run k
    std::vector<long long> run_end;    // last block position of run k
    bool threshold_ok = true;
    long long threshold_min_N = 0;  // smallest N that would satisfy it
};

enum class NodeKind { block_interior, growth_digit, padding };

/// Classification of one digit position.
struct PositionInfo {
    NodeKind kind = NodeKind::block_interior;
    int growth_index = -1;   // growth_digit: which i in 0..m-1
    int run = 0;             // block positions: which run
    bool run_word_end = false;  // completes one length-N block word
    long long digit_lo = 1;  // admissible digit range at this position
    long long digit_hi = 1;
};

/// Fully resolved construction: schedule, per-block exponents bold-d_j,
/// normalization of the block-word measure weights, digit ranges.
struct CantorConfig {
    CantorRequest request;
    CantorSchedule schedule;
    std::vector<double> d;         // bold-d_j, j = 0..m-1
    std::vector<double> log_norm;  // ln sum_w phi_j(w) before normalization
    std::vector<PositionInfo> positions;  // 1-based; positions[0] unused
    long long max_level = 0;              // deepest precomputed position

    const PositionInfo& at(long long position) const;
};

/// Resolves the request: sparsity schedule (strict) or gap decomposition
/// (padded), block exponents, measure normalizers, digit ranges.  Throws
/// DegenerateRangeError if a growth digit range contains no integer and
/// ThresholdError when the block-length threshold is enforced and violated.
CantorConfig build_schedule(const CantorRequest& req, long long max_level = 0);

/// One tree node as streamed by expand_level and the verifiers.  The length
/// bracket bounds |J_n| per the construction's length estimates; log_mu holds
/// ln mu_j(J_n) for j = 0..m-1.
struct MeasureNode {
    DigitWord word;
    NodeKind kind = NodeKind::block_interior;  // kind of the branching below this node
    int growth_index = -1;
    double log_len_lo = 0.0;
    double log_len_hi = 0.0;
    std::vector<double> log_mu;
};

struct ConsistencyReport {
    bool ok = true;
    std::uint64_t internal_nodes = 0;
    double max_rel_violation = 0.0;  // worst |sum(children) - parent| / parent
    DigitWord worst;
    std::vector<std::vector<double>> level_mass;  // [level][j], should all be 1
    double max_mass_error = 0.0;
};

struct GapLevelStat {
    int level = 0;
    std::uint64_t cylinders = 0;
    double min_ratio = 0.0;  // min over adjacent pairs of gap * M / min(|L|,|R|)
};

struct GapReport {
    bool ok = true;
    std::vector<GapLevelStat> levels;
};

struct LengthReport {
    bool ok = true;
    std::uint64_t nodes = 0;
    std::uint64_t constant_violations = 0;  // bracket missed by a bounded factor
    std::uint64_t exponent_violations = 0;  // bracket missed by a growing factor
    DigitWord worst;
    double worst_log_margin = 0.0;  // min over nodes of slack to the bracket
};

struct HolderLevelStat {
    int level = 0;
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
};

struct HolderReport {
    double tau = 0.0;      // min_j d_j / (1 + eps)
    int burn_in = 0;
    bool ok = true;        // median beyond burn-in >= tau - slack
    double median_beyond_burn_in = 0.0;
    double inf_beyond_burn_in = 0.0;
    std::vector<HolderLevelStat> levels;  // padding levels excluded
};

/// Test hook: scales mu_j of the node at `path` by (1 + rel) during walks.
struct Corruption {
    DigitWord path;
    int j = 0;
    double rel = 1e-6;
};

/// Walker over the surviving cylinder tree.  Exact continuant geometry with
/// streaming verification; nothing is materialized beyond one root-to-leaf
/// path and per-level lookbehind state.
class CantorTree {
public:
    explicit CantorTree(CantorConfig config);

    const CantorConfig& config() const { return config_; }

    /// Streams every node at exactly `level` in left-to-right spatial order.
    void expand_level(int level, const std::function<void(const MeasureNode&)>& sink) const;

    /// sum(children) == parent for every internal node, and full mass at
    /// every level, to exact-arithmetic tolerance.
    ConsistencyReport verify_consistency(int depth,
                                         const std::optional<Corruption>& corrupt = {}) const;

    /// Adjacent same-level cylinders are separated by at least
    /// min(|L|, |R|) / alphabet_max.  Exact rational comparisons.
    GapReport verify_gap(int depth) const;

    /// Exact |J_n| lies inside the per-kind length bracket at every node.
    LengthReport verify_lengths(int depth) const;

    /// Local exponents r = ln mu(J_n) / ln |J_n| against tau.
    HolderReport holder_report(int depth, int burn_in = -1, double slack = 0.05) const;

    /// One node per line: word, kind, length bracket, measures.
    void dump(std::ostream& os, int depth) const;

    /// Internal visitor contract; defined in the implementation only.
    struct Walk;

private:
    void run_walk(int depth, Walk& walk) const;

    CantorConfig config_;
};

std::string to_string(NodeKind kind);

}  // namespace cfdim
