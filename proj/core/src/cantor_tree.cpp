#include "cfdim/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "cfdim/enumerate.hpp"
#include "cantor_walk.hpp"

namespace cfdim {

namespace {

constexpr double kLn2 = 0.6931471805599453094;

// Raw block-word weights q_N(w)^{-2 d_j} on the full word trie, plus the
// partial-word sums over completions that interior block orders need.  Row r
// holds all words of length r in lexicographic order starting at off[r].
struct WordWeightTable {
    std::vector<std::size_t> off;
    std::vector<double> t;  // [index * m + j] = sum over completions of q_N^{-2 d_j}
    int m = 0;

    WordWeightTable(int alphabet_max, int block_len, const std::vector<double>& d) {
        m = static_cast<int>(d.size());
        const int M = alphabet_max;
        const int N = block_len;
        std::uint64_t words = word_count(static_cast<std::uint64_t>(M), N);
        if (words > (std::uint64_t{1} << 21))
            throw BudgetError("block-word weight table exceeds the enumeration cap", words,
                              std::uint64_t{1} << 21);
        off.assign(static_cast<std::size_t>(N) + 2, 0);
        std::size_t row = 1;
        for (int r = 0; r <= N; ++r) {
            off[static_cast<std::size_t>(r) + 1] = off[static_cast<std::size_t>(r)] + row;
            row *= static_cast<std::size_t>(M);
        }
        t.assign(off[static_cast<std::size_t>(N) + 1] * static_cast<std::size_t>(m), 0.0);

        std::vector<std::size_t> lex(static_cast<std::size_t>(N) + 1, 0);
        walk_words_u64(M, N, [&](const std::uint64_t* digits, int level, ContinuantPair64 st) {
            std::size_t a = static_cast<std::size_t>(digits[level - 1]) - 1;
            lex[static_cast<std::size_t>(level)] =
                level == 1 ? a : lex[static_cast<std::size_t>(level) - 1] * static_cast<std::size_t>(M) + a;
            if (level != N) return;
            double lq = std::log(static_cast<double>(st.q));
            double* leaf = &t[(off[static_cast<std::size_t>(N)] + lex[static_cast<std::size_t>(N)]) *
                              static_cast<std::size_t>(m)];
            for (int j = 0; j < m; ++j) leaf[j] = std::exp(-2.0 * d[static_cast<std::size_t>(j)] * lq);
        });
        for (int r = N - 1; r >= 0; --r) {
            std::size_t parents = off[static_cast<std::size_t>(r) + 1] - off[static_cast<std::size_t>(r)];
            for (std::size_t idx = 0; idx < parents; ++idx) {
                double* parent = &t[(off[static_cast<std::size_t>(r)] + idx) * static_cast<std::size_t>(m)];
                for (int a = 0; a < M; ++a) {
                    const double* child =
                        &t[(off[static_cast<std::size_t>(r) + 1] + idx * static_cast<std::size_t>(M) +
                            static_cast<std::size_t>(a)) *
                           static_cast<std::size_t>(m)];
                    for (int j = 0; j < m; ++j) parent[j] += child[j];
                }
            }
        }
    }

    const double* at(int word_len, std::size_t lex) const {
        return &t[(off[static_cast<std::size_t>(word_len)] + lex) * static_cast<std::size_t>(m)];
    }
};

void format_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out += buf;
}

}  // namespace

CantorTree::CantorTree(CantorConfig config) : config_(std::move(config)) {
    if (config_.positions.size() < 2) throw Error("cantor config carries no positions");
    if (config_.d.empty()) throw Error("cantor config carries no block exponents");
}

void CantorTree::run_walk(int depth, Walk& walk) const {
    const CantorConfig& cfg = config_;
    const CantorSchedule& sched = cfg.schedule;
    const GrowthProfile& profile = cfg.request.profile;
    const int m = static_cast<int>(cfg.d.size());
    const int M = cfg.request.alphabet_max;
    const int N = cfg.request.block_len;
    const int K = static_cast<int>(sched.n_k.size());
    if (depth < 0) throw Error("depth must be nonnegative");
    if (depth + 1 >= static_cast<long long>(cfg.positions.size()))
        throw Error("depth exceeds the precomputed horizon; rebuild the config with a larger max_level");

    // The level widths are exact products of the per-position branch counts,
    // so the walk size is known before any node is expanded.
    long double width = 1.0L, total = 0.0L;
    for (int p = 1; p <= depth; ++p) {
        const PositionInfo& info = cfg.at(p);
        width *= static_cast<long double>(info.digit_hi - info.digit_lo + 1);
        total += width;
    }
    if (total > static_cast<long double>(cfg.request.budget.max_nodes)) {
        std::uint64_t required = total < 1.8e19L ? static_cast<std::uint64_t>(total)
                                                 : std::numeric_limits<std::uint64_t>::max();
        throw BudgetError("cantor tree walk exceeds the node budget", required, cfg.request.budget.max_nodes);
    }

    WordWeightTable tab(M, N, cfg.d);
    std::vector<double> logT_full(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) logT_full[static_cast<std::size_t>(j)] = std::log(tab.at(0, 0)[j]);

    // Profile logs used by the length brackets.
    std::vector<double> log_beta(static_cast<std::size_t>(m) + 1);  // [i+1] = ln beta_i, [0] = ln beta_{-1}
    for (int i = -1; i < m; ++i) log_beta[static_cast<std::size_t>(i + 1)] = std::log(profile.beta(i));
    std::vector<double> log_c(static_cast<std::size_t>(m)), log_c_prefix(static_cast<std::size_t>(m) + 1, 0.0);
    for (int i = 0; i < m; ++i) {
        log_c[static_cast<std::size_t>(i)] = std::log(profile.c[static_cast<std::size_t>(i)]);
        log_c_prefix[static_cast<std::size_t>(i + 1)] =
            log_c_prefix[static_cast<std::size_t>(i)] + log_c[static_cast<std::size_t>(i)];
    }
    const double log_a_last = std::log(profile.A[static_cast<std::size_t>(m - 1)]);

    // Per-level walk state; descendants only touch deeper slots, so pointers
    // handed to enter() stay valid through the subtree.
    std::vector<Convergent> conv(static_cast<std::size_t>(depth) + 1);
    std::vector<std::vector<double>> logmu(static_cast<std::size_t>(depth) + 1,
                                           std::vector<double>(static_cast<std::size_t>(m), 0.0));
    std::vector<double> word_q(static_cast<std::size_t>(depth) + 1, 1.0);
    std::vector<double> word_qp(static_cast<std::size_t>(depth) + 1, 0.0);
    std::vector<std::size_t> word_lex(static_cast<std::size_t>(depth) + 1, 0);
    std::vector<double> run_logq(static_cast<std::size_t>(depth) + 1, 0.0);
    std::vector<double> growth_base(static_cast<std::size_t>(K) + 2, 0.0);
    std::vector<double> run_base(static_cast<std::size_t>(K) + 2, 0.0);
    std::vector<CylinderInterval> ivs(static_cast<std::size_t>(depth) + 1);
    DigitWord path;
    path.reserve(static_cast<std::size_t>(depth));

    auto visit = [&](auto&& self, int level) -> void {
        const PositionInfo& below = cfg.at(level + 1);
        const Convergent& c = conv[static_cast<std::size_t>(level)];

        if (below.kind == NodeKind::growth_digit && below.growth_index == 0)
            growth_base[static_cast<std::size_t>(below.run)] = c.log_q;
        if (below.kind == NodeKind::block_interior &&
            level + 1 == sched.run_start[static_cast<std::size_t>(below.run - 1)]) {
            run_base[static_cast<std::size_t>(below.run)] = c.log_q;
            run_logq[static_cast<std::size_t>(level)] = 0.0;
        }

        Walk::Node node;
        node.level = level;
        node.digits = &path;
        node.conv = &c;
        node.log_mu = &logmu[static_cast<std::size_t>(level)];
        node.below = &below;
        node.log_len_hi = -2.0 * c.log_q;
        switch (below.kind) {
            case NodeKind::block_interior:
                node.log_len_lo = -3.0 * kLn2 - 2.0 * c.log_q;
                break;
            case NodeKind::growth_digit: {
                int i = below.growth_index;
                double n_k = static_cast<double>(sched.n_k[static_cast<std::size_t>(below.run - 1)]);
                node.log_len_lo = -(std::log(6.0) + i * 2.0 * kLn2 + log_c[static_cast<std::size_t>(i)] +
                                    2.0 * log_c_prefix[static_cast<std::size_t>(i)]) -
                                  n_k * (log_beta[static_cast<std::size_t>(i + 1)] +
                                         log_beta[static_cast<std::size_t>(i)]) -
                                  2.0 * growth_base[static_cast<std::size_t>(below.run)];
                break;
            }
            case NodeKind::padding:
                node.log_len_lo = -std::log(12.0) - 2.0 * c.log_q;
                node.log_len_hi = -std::log(6.0) - 2.0 * c.log_q;
                break;
        }
        if (level >= 1) {
            const PositionInfo& own = cfg.at(level);
            if (own.kind == NodeKind::growth_digit && own.growth_index == m - 1) {
                double n_k = static_cast<double>(sched.n_k[static_cast<std::size_t>(own.run - 1)]);
                node.extra_lo_growth_tail =
                    -(std::log(6.0) + (m - 1) * 2.0 * kLn2 + 2.0 * log_c_prefix[static_cast<std::size_t>(m)]) -
                    n_k * (log_a_last + log_beta[static_cast<std::size_t>(m)] +
                           log_beta[static_cast<std::size_t>(m - 1)]) -
                    2.0 * growth_base[static_cast<std::size_t>(own.run)];
            }
            // The run-word floor skips each run's final word: there the
            // branching below is no longer a full block range.
            if (own.kind == NodeKind::block_interior && own.run_word_end &&
                level != sched.run_end[static_cast<std::size_t>(own.run - 1)]) {
                long long rs = sched.run_start[static_cast<std::size_t>(own.run - 1)];
                long long ell = (level - rs + 1) / N;
                node.extra_lo_run_words = -3.0 * kLn2 - 2.0 * static_cast<double>(ell) * kLn2 -
                                          2.0 * run_logq[static_cast<std::size_t>(level)] -
                                          2.0 * run_base[static_cast<std::size_t>(own.run)];
            }
        }
        if (walk.needs_geometry) {
            if (c.q > 1 && static_cast<int>(boost::multiprecision::msb(c.q)) + 1 > cfg.request.max_exact_bits)
                throw Error("continuant exceeds the exact-geometry bit budget; raise max_exact_bits");
            ivs[static_cast<std::size_t>(level)] = cylinder_range_interval(c, below.digit_lo, below.digit_hi);
            node.interval = &ivs[static_cast<std::size_t>(level)];
        }

        walk.enter(node);

        if (level < depth) {
            // Sub-cylinders ascend with the digit when the parent order is
            // odd and descend when it is even; iterating that way emits every
            // level of the tree in left-to-right spatial order.
            bool ascending = level % 2 == 1;
            long long a = ascending ? below.digit_lo : below.digit_hi;
            long long stop = ascending ? below.digit_hi + 1 : below.digit_lo - 1;
            long long step = ascending ? 1 : -1;
            for (; a != stop; a += step) {
                std::size_t child = static_cast<std::size_t>(level) + 1;
                conv[child] = c;
                conv[child].push(a);
                path.push_back(a);
                switch (below.kind) {
                    case NodeKind::block_interior: {
                        long long rs = sched.run_start[static_cast<std::size_t>(below.run - 1)];
                        int wp = static_cast<int>((level + 1 - rs) % N);  // offset inside the word
                        long long wstart = level + 1 - wp;
                        if (wp == 0) {
                            word_q[child] = static_cast<double>(a);
                            word_qp[child] = 1.0;
                            word_lex[child] = static_cast<std::size_t>(a - 1);
                        } else {
                            word_q[child] = static_cast<double>(a) * word_q[child - 1] + word_qp[child - 1];
                            word_qp[child] = word_q[child - 1];
                            word_lex[child] =
                                word_lex[child - 1] * static_cast<std::size_t>(M) + static_cast<std::size_t>(a - 1);
                        }
                        const double* part = tab.at(wp + 1, word_lex[child]);
                        const std::vector<double>& anchor = logmu[static_cast<std::size_t>(wstart) - 1];
                        for (int j = 0; j < m; ++j)
                            logmu[child][static_cast<std::size_t>(j)] =
                                anchor[static_cast<std::size_t>(j)] + std::log(part[j]) -
                                logT_full[static_cast<std::size_t>(j)];
                        run_logq[child] = wp == N - 1
                                              ? run_logq[static_cast<std::size_t>(wstart) - 1] + std::log(word_q[child])
                                              : run_logq[child - 1];
                        break;
                    }
                    case NodeKind::growth_digit: {
                        double split = std::log(static_cast<double>(below.digit_hi - below.digit_lo + 1));
                        for (int j = 0; j < m; ++j)
                            logmu[child][static_cast<std::size_t>(j)] =
                                logmu[child - 1][static_cast<std::size_t>(j)] - split;
                        run_logq[child] = 0.0;
                        break;
                    }
                    case NodeKind::padding:
                        logmu[child] = logmu[child - 1];
                        run_logq[child] = run_logq[child - 1];
                        break;
                }
                self(self, level + 1);
                path.pop_back();
            }
        }

        walk.leave(node);
    };
    visit(visit, 0);
}

namespace {

struct LevelSink final : CantorTree::Walk {
    int target;
    const std::function<void(const MeasureNode&)>* sink;

    void enter(const Node& node) override {
        if (node.level != target) return;
        MeasureNode out;
        out.word = *node.digits;
        out.kind = node.below->kind;
        out.growth_index = node.below->growth_index;
        out.log_len_lo = node.log_len_lo;
        out.log_len_hi = node.log_len_hi;
        out.log_mu = *node.log_mu;
        (*sink)(out);
    }
};

}  // namespace

void CantorTree::expand_level(int level, const std::function<void(const MeasureNode&)>& sink) const {
    LevelSink walk;
    walk.target = level;
    walk.sink = &sink;
    run_walk(level, walk);
}

void CantorTree::dump(std::ostream& os, int depth) const {
    for (int level = 0; level <= depth; ++level) {
        expand_level(level, [&](const MeasureNode& node) {
            std::string line;
            if (node.word.empty()) {
                line += '-';
            } else {
                for (std::size_t i = 0; i < node.word.size(); ++i) {
                    if (i) line += ',';
                    line += std::to_string(node.word[i]);
                }
            }
            line += '\t';
            line += to_string(node.kind);
            if (node.kind == NodeKind::growth_digit) {
                line += '(';
                line += std::to_string(node.growth_index);
                line += ')';
            }
            line += '\t';
            format_double(line, node.log_len_lo);
            line += '\t';
            format_double(line, node.log_len_hi);
            line += '\t';
            for (std::size_t j = 0; j < node.log_mu.size(); ++j) {
                if (j) line += ',';
                format_double(line, node.log_mu[j]);
            }
            line += '\n';
            os << line;
        });
    }
}

}  // namespace cfdim
