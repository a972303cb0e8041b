#include "cfdim/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "cfdim/logsum.hpp"
#include "cantor_walk.hpp"

namespace cfdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConsistencyTol = 1e-10;
// Bracket misses up to a factor of 64 count as constant slack; anything
// beyond grows with the level and falsifies the estimate.
const double kConstantSlack = 6.0 * 0.6931471805599453094;

double median_inplace(std::vector<double>& v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    double lower = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lower + upper);
}

struct ConsistencyWalk final : CantorTree::Walk {
    int depth = 0;
    int m = 0;
    const std::optional<Corruption>* corrupt = nullptr;
    std::vector<std::vector<double>> own;          // [level][j], linear domain
    std::vector<std::vector<KahanSum>> child_sum;  // children of the open node at level-1
    std::vector<std::vector<KahanSum>> mass;
    double max_rel = 0.0;
    DigitWord worst;
    std::uint64_t internal = 0;

    void enter(const Node& node) override {
        std::size_t L = static_cast<std::size_t>(node.level);
        for (int j = 0; j < m; ++j)
            own[L][static_cast<std::size_t>(j)] = std::exp((*node.log_mu)[static_cast<std::size_t>(j)]);
        if (corrupt->has_value() && (*corrupt)->path == *node.digits)
            own[L][static_cast<std::size_t>((*corrupt)->j)] *= 1.0 + (*corrupt)->rel;
        for (int j = 0; j < m; ++j) mass[L][static_cast<std::size_t>(j)].add(own[L][static_cast<std::size_t>(j)]);
        if (node.level >= 1)
            for (int j = 0; j < m; ++j) child_sum[L][static_cast<std::size_t>(j)].add(own[L][static_cast<std::size_t>(j)]);
        if (node.level < depth)
            for (int j = 0; j < m; ++j) child_sum[L + 1][static_cast<std::size_t>(j)] = KahanSum{};
    }

    void leave(const Node& node) override {
        if (node.level >= depth) return;
        ++internal;
        std::size_t L = static_cast<std::size_t>(node.level);
        for (int j = 0; j < m; ++j) {
            double parent = own[L][static_cast<std::size_t>(j)];
            double rel = std::abs(child_sum[L + 1][static_cast<std::size_t>(j)].value() / parent - 1.0);
            if (rel > max_rel) {
                max_rel = rel;
                worst = *node.digits;
            }
        }
    }
};

struct GapLane {
    bool has = false;
    BigInt right_num, right_den;
    BigInt len_num, len_den;
    std::uint64_t count = 0;
    double min_ratio = kInf;
    bool exact_ok = true;
};

struct GapWalk final : CantorTree::Walk {
    long long M = 0;
    double log_M = 0.0;
    std::vector<GapLane> lanes;

    GapWalk() { needs_geometry = true; }

    void enter(const Node& node) override {
        GapLane& lane = lanes[static_cast<std::size_t>(node.level)];
        const CylinderInterval& iv = *node.interval;
        ++lane.count;
        if (lane.has) {
            // Gap from the previous cylinder's right edge to this left edge,
            // tested in exact rationals against the narrower neighbor.
            BigInt g_num = iv.left_num * lane.right_den - lane.right_num * iv.left_den;
            BigInt g_den = iv.left_den * lane.right_den;
            if (g_num < 0) {
                lane.exact_ok = false;
                lane.min_ratio = -kInf;
            } else {
                bool prev_narrower = lane.len_num * iv.len_den <= iv.len_num * lane.len_den;
                const BigInt& n_num = prev_narrower ? lane.len_num : iv.len_num;
                const BigInt& n_den = prev_narrower ? lane.len_den : iv.len_den;
                if (g_num * M * n_den < n_num * g_den) lane.exact_ok = false;
                double ratio = g_num == 0 ? 0.0
                                          : std::exp(log_M + log_big(g_num) - log_big(g_den) -
                                                     log_big(n_num) + log_big(n_den));
                lane.min_ratio = std::min(lane.min_ratio, ratio);
            }
        }
        lane.has = true;
        lane.right_num = iv.right_num;
        lane.right_den = iv.right_den;
        lane.len_num = iv.len_num;
        lane.len_den = iv.len_den;
    }
};

struct LengthWalk final : CantorTree::Walk {
    std::uint64_t nodes = 0;
    std::uint64_t constant_violations = 0;
    std::uint64_t exponent_violations = 0;
    double worst_margin = kInf;
    DigitWord worst;

    LengthWalk() { needs_geometry = true; }

    void enter(const Node& node) override {
        ++nodes;
        const CylinderInterval& iv = *node.interval;
        double ln_len = log_big(iv.len_num) - log_big(iv.len_den);
        double margin = std::min(ln_len - node.log_len_lo, node.log_len_hi - ln_len);
        if (!std::isnan(node.extra_lo_growth_tail))
            margin = std::min(margin, ln_len - node.extra_lo_growth_tail);
        if (!std::isnan(node.extra_lo_run_words))
            margin = std::min(margin, ln_len - node.extra_lo_run_words);
        if (margin < worst_margin) {
            worst_margin = margin;
            worst = *node.digits;
        }
        if (margin < 0.0) {
            if (margin >= -kConstantSlack)
                ++constant_violations;
            else
                ++exponent_violations;
        }
    }
};

struct HolderWalk final : CantorTree::Walk {
    int jstar = 0;
    const std::vector<char>* padding_level = nullptr;
    std::vector<std::vector<double>> r;  // [level], non-padding levels only

    HolderWalk() { needs_geometry = true; }

    void enter(const Node& node) override {
        std::size_t L = static_cast<std::size_t>(node.level);
        if ((*padding_level)[L]) return;
        double log_mu = (*node.log_mu)[static_cast<std::size_t>(jstar)];
        if (log_mu == 0.0) {
            r[L].push_back(0.0);
            return;
        }
        const CylinderInterval& iv = *node.interval;
        double ln_len = log_big(iv.len_num) - log_big(iv.len_den);
        r[L].push_back(log_mu / ln_len);
    }
};

}  // namespace

ConsistencyReport CantorTree::verify_consistency(int depth,
                                                 const std::optional<Corruption>& corrupt) const {
    const int m = static_cast<int>(config_.d.size());
    ConsistencyWalk walk;
    walk.depth = depth;
    walk.m = m;
    walk.corrupt = &corrupt;
    walk.own.assign(static_cast<std::size_t>(depth) + 1, std::vector<double>(static_cast<std::size_t>(m), 0.0));
    walk.child_sum.assign(static_cast<std::size_t>(depth) + 1,
                          std::vector<KahanSum>(static_cast<std::size_t>(m)));
    walk.mass.assign(static_cast<std::size_t>(depth) + 1, std::vector<KahanSum>(static_cast<std::size_t>(m)));
    run_walk(depth, walk);

    ConsistencyReport rep;
    rep.internal_nodes = walk.internal;
    rep.max_rel_violation = walk.max_rel;
    rep.worst = std::move(walk.worst);
    rep.level_mass.assign(static_cast<std::size_t>(depth) + 1,
                          std::vector<double>(static_cast<std::size_t>(m), 0.0));
    for (int L = 0; L <= depth; ++L)
        for (int j = 0; j < m; ++j) {
            double v = walk.mass[static_cast<std::size_t>(L)][static_cast<std::size_t>(j)].value();
            rep.level_mass[static_cast<std::size_t>(L)][static_cast<std::size_t>(j)] = v;
            rep.max_mass_error = std::max(rep.max_mass_error, std::abs(v - 1.0));
        }
    rep.ok = rep.max_rel_violation <= kConsistencyTol && rep.max_mass_error <= kConsistencyTol;
    return rep;
}

GapReport CantorTree::verify_gap(int depth) const {
    GapWalk walk;
    walk.M = config_.request.alphabet_max;
    walk.log_M = std::log(static_cast<double>(walk.M));
    walk.lanes.assign(static_cast<std::size_t>(depth) + 1, GapLane{});
    run_walk(depth, walk);

    GapReport rep;
    for (int L = 0; L <= depth; ++L) {
        const GapLane& lane = walk.lanes[static_cast<std::size_t>(L)];
        GapLevelStat stat;
        stat.level = L;
        stat.cylinders = lane.count;
        stat.min_ratio = lane.count <= 1 ? kInf : lane.min_ratio;
        rep.levels.push_back(stat);
        if (!lane.exact_ok) rep.ok = false;
    }
    return rep;
}

LengthReport CantorTree::verify_lengths(int depth) const {
    LengthWalk walk;
    run_walk(depth, walk);

    LengthReport rep;
    rep.nodes = walk.nodes;
    rep.constant_violations = walk.constant_violations;
    rep.exponent_violations = walk.exponent_violations;
    rep.worst = std::move(walk.worst);
    rep.worst_log_margin = walk.nodes ? walk.worst_margin : 0.0;
    rep.ok = walk.exponent_violations == 0;
    return rep;
}

HolderReport CantorTree::holder_report(int depth, int burn_in, double slack) const {
    const int m = static_cast<int>(config_.d.size());
    int jstar = 0;
    for (int j = 1; j < m; ++j)
        if (config_.d[static_cast<std::size_t>(j)] < config_.d[static_cast<std::size_t>(jstar)]) jstar = j;

    std::vector<char> padding_level(static_cast<std::size_t>(depth) + 1, 0);
    for (int L = 1; L <= depth; ++L)
        padding_level[static_cast<std::size_t>(L)] = config_.at(L).kind == NodeKind::padding ? 1 : 0;

    HolderWalk walk;
    walk.jstar = jstar;
    walk.padding_level = &padding_level;
    walk.r.assign(static_cast<std::size_t>(depth) + 1, {});
    run_walk(depth, walk);

    HolderReport rep;
    rep.tau = config_.d[static_cast<std::size_t>(jstar)] / (1.0 + config_.request.eps);
    if (burn_in < 0)
        burn_in = static_cast<int>(
            std::min<long long>(config_.request.block_len + m, static_cast<long long>(depth) - 1));
    rep.burn_in = burn_in;

    std::vector<double> pooled;
    rep.inf_beyond_burn_in = kInf;
    for (int L = 0; L <= depth; ++L) {
        if (padding_level[static_cast<std::size_t>(L)]) continue;
        std::vector<double>& rs = walk.r[static_cast<std::size_t>(L)];
        HolderLevelStat stat;
        stat.level = L;
        stat.min = *std::min_element(rs.begin(), rs.end());
        stat.max = *std::max_element(rs.begin(), rs.end());
        if (L > burn_in) {
            rep.inf_beyond_burn_in = std::min(rep.inf_beyond_burn_in, stat.min);
            pooled.insert(pooled.end(), rs.begin(), rs.end());
        }
        stat.median = median_inplace(rs);
        rep.levels.push_back(stat);
    }
    rep.median_beyond_burn_in = median_inplace(pooled);
    rep.ok = rep.median_beyond_burn_in >= rep.tau - slack;
    return rep;
}

}  // namespace cfdim
