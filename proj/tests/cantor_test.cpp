#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cfdim/cantor.hpp"
#include "cfdim/continuants.hpp"

using namespace cfdim;

namespace {

CantorRequest desk_request() {
    CantorRequest req;
    req.alphabet_max = 3;
    req.block_len = 2;
    req.profile.A = {3.0, 2.0};
    req.eps = 1.0;
    req.blocks = 2;
    return req;
}

// Oracle: the union of the child cylinders for digits lo..hi spans between
// the mediant-like endpoints (lo p + p')/(lo q + q') and the far edge of the
// hi cylinder, so telescoping the unimodular determinants gives
//   |hull| = (hi + 1 - lo) / ((lo q + q') ((hi + 1) q + q')).
void hull_closed_form(const Convergent& c, long long lo, long long hi, BigInt& num, BigInt& den) {
    num = hi + 1 - lo;
    den = (lo * c.q + c.q_prev) * ((hi + 1) * c.q + c.q_prev);
}

std::vector<long long> widths(const CantorConfig& cfg, int depth) {
    std::vector<long long> w;
    for (int p = 1; p <= depth; ++p) w.push_back(cfg.at(p).digit_hi - cfg.at(p).digit_lo + 1);
    return w;
}

}  // namespace

TEST_CASE("strict schedule: run lengths grow to dominate the accumulated history") {
    CantorConfig cfg = build_schedule(desk_request());
    const CantorSchedule& s = cfg.schedule;
    // By hand: run 1 owes nothing, so ell_1 = 1 and the first growth pair
    // lands at positions 3,4.  Run 2 must absorb 2 ln4 + 3 ln6 at a
    // separation rate of (ln2)/4 per block, which takes 48 blocks.
    CHECK(s.ell == std::vector<long long>{1, 48});
    CHECK(s.n_k == std::vector<long long>{3, 101});
    CHECK(s.run_start == std::vector<long long>{1, 5, 103});
    CHECK(s.run_end[0] == 2);
    CHECK(s.run_end[1] == 100);
    // Strict packing leaves no padding: growth digits abut their run.
    for (std::size_t k = 0; k < s.n_k.size(); ++k) CHECK(s.n_k[k] == s.run_end[k] + 1);
    CHECK_FALSE(s.threshold_ok);
    CHECK(s.threshold_min_N == 17);

    CantorRequest three = desk_request();
    three.blocks = 3;
    CantorConfig cfg3 = build_schedule(three);
    CHECK(cfg3.schedule.ell[2] > cfg3.schedule.ell[1]);
    CHECK(cfg3.schedule.run_start[2] == cfg3.schedule.n_k[1] + 2);
}

TEST_CASE("strict schedule: a second hand-checked instance") {
    CantorRequest req;
    req.alphabet_max = 3;
    req.block_len = 4;
    req.profile.A = {2.0, 2.0};
    req.eps = 1.0;
    req.blocks = 2;
    CantorConfig cfg = build_schedule(req);
    // rhs after run 1 is 9 ln4 and the per-block coefficient is (3/4) ln2,
    // which divides out to exactly 24 blocks.
    CHECK(cfg.schedule.ell == std::vector<long long>{1, 24});
    CHECK(cfg.schedule.n_k == std::vector<long long>{5, 103});
}

TEST_CASE("padded schedule: gaps decompose into block runs plus 2-padding") {
    CantorRequest req;
    req.alphabet_max = 2;
    req.block_len = 2;
    req.profile.A = {3.0};
    req.mode = CantorMode::padded;
    req.n_k = {5, 11, 23};
    CantorConfig cfg = build_schedule(req);
    // ell_k = floor((gap - (N-1)) / N) with gap measured from the run start.
    CHECK(cfg.schedule.ell == std::vector<long long>{1, 2, 5});
    CHECK(cfg.schedule.n_k == std::vector<long long>{5, 11, 23});
    CHECK(cfg.schedule.run_start == std::vector<long long>{1, 6, 12, 24});
    CHECK(cfg.at(3).kind == NodeKind::padding);
    CHECK(cfg.at(3).digit_lo == 2);
    CHECK(cfg.at(3).digit_hi == 2);
    CHECK(cfg.at(5).kind == NodeKind::growth_digit);
    CHECK(cfg.at(5).digit_lo == 243);  // ceil(3^5)
    CHECK(cfg.at(5).digit_hi == 485);  // ceil(2 * 3^5) - 1
    CHECK(cfg.at(6).run == 2);
    CHECK(cfg.at(7).run_word_end);
    CHECK_FALSE(cfg.at(6).run_word_end);

    CHECK_THROWS_AS(cfg.at(0), Error);
    CHECK_THROWS_AS(cfg.at(cfg.max_level + 2), Error);
}

TEST_CASE("schedule validation and threshold enforcement") {
    CantorRequest req = desk_request();
    req.enforce_threshold = true;
    try {
        build_schedule(req);
        FAIL("threshold violation not raised");
    } catch (const ThresholdError& e) {
        CHECK(e.minimal_block_len == 17);
    }

    // N = 17 at eps = 1 sits exactly on the threshold for C = 16.
    CantorRequest ok;
    ok.alphabet_max = 2;
    ok.block_len = 17;
    ok.profile.A = {3.0};
    ok.blocks = 1;
    ok.enforce_threshold = true;
    CantorConfig built = build_schedule(ok);
    CHECK(built.schedule.threshold_ok);
    CHECK(built.schedule.threshold_min_N == 17);

    // A growth range whose scale undershoots 1/2 holds no integer.
    CantorRequest degenerate;
    degenerate.alphabet_max = 2;
    degenerate.block_len = 2;
    degenerate.profile.A = {1.1};
    degenerate.profile.c = {0.001};
    degenerate.mode = CantorMode::padded;
    degenerate.n_k = {3};
    try {
        build_schedule(degenerate);
        FAIL("degenerate growth range not raised");
    } catch (const DegenerateRangeError& e) {
        CHECK(e.growth_index == 0);
        CHECK(e.block_index == 1);
    }

    // 64-bit digit guard.
    CantorRequest huge;
    huge.alphabet_max = 2;
    huge.block_len = 2;
    huge.profile.A = {3.0};
    huge.mode = CantorMode::padded;
    huge.n_k = {50};
    CHECK_THROWS_AS(build_schedule(huge), OverflowError);

    CantorRequest bad = desk_request();
    bad.alphabet_max = 1;
    CHECK_THROWS_AS(build_schedule(bad), Error);
    bad = desk_request();
    bad.eps = 0.0;
    CHECK_THROWS_AS(build_schedule(bad), Error);
    bad = desk_request();
    bad.mode = CantorMode::padded;  // no positions given
    CHECK_THROWS_AS(build_schedule(bad), Error);

    CHECK_THROWS_AS(CantorTree(CantorConfig{}), Error);
}

TEST_CASE("block exponents normalize the word weights") {
    CantorConfig cfg = build_schedule(desk_request());
    REQUIRE(cfg.d.size() == 2);
    // Independent restatement of the defining identity: summing the
    // normalized weights over all 9 block words must give 1 for each j.
    const double betas[3] = {1.0, 3.0, 6.0};  // beta_{-1}, beta_0, beta_1
    for (int j = 0; j < 2; ++j) {
        double d = cfg.d[static_cast<std::size_t>(j)];
        double sum = 0.0;
        for (long long a = 1; a <= 3; ++a)
            for (long long b = 1; b <= 3; ++b) {
                double q = static_cast<double>(b * a + 1);
                sum += std::pow(betas[j], 2.0) *
                       std::pow(q * q, -d) * std::pow(betas[j + 1] * betas[j], -2.0 * d);
            }
        CHECK(std::fabs(sum - 1.0) <= 1e-9);
        CHECK(std::fabs(cfg.log_norm[static_cast<std::size_t>(j)]) <= 1e-9);
        CHECK(cfg.d[static_cast<std::size_t>(j)] > 0.0);
        CHECK(cfg.d[static_cast<std::size_t>(j)] < 1.0);
    }
    // The first window lacks the beta_{j-1}^N boost, so its root sits lower.
    CHECK(cfg.d[0] < cfg.d[1]);
}

TEST_CASE("measure consistency: children sum to their parent at machine precision") {
    CantorTree tree(build_schedule(desk_request(), 10));
    ConsistencyReport rep = tree.verify_consistency(6);
    CHECK(rep.ok);
    CHECK(rep.internal_nodes == 8032);  // 1+3+9+243+1944+5832
    CHECK(rep.max_rel_violation <= 1e-12);
    CHECK(rep.max_mass_error <= 1e-12);
    REQUIRE(rep.level_mass.size() == 7);
    for (const auto& level : rep.level_mass)
        for (double mass : level) CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measure consistency: a planted defect is found and localized") {
    CantorTree tree(build_schedule(desk_request(), 10));
    Corruption bad;
    bad.path = DigitWord{2, 1, 30};
    bad.j = 1;
    bad.rel = 1e-6;
    ConsistencyReport rep = tree.verify_consistency(6, bad);
    CHECK_FALSE(rep.ok);
    // The corrupted node's own children now undershoot it by exactly the
    // planted relative error; that dwarfs the dilution seen by its parent.
    CHECK(rep.max_rel_violation >= 9e-7);
    CHECK(rep.max_rel_violation <= 1.1e-6);
    CHECK(rep.worst == DigitWord{2, 1, 30});
}

TEST_CASE("gap verification: adjacent cylinders keep their separation") {
    CantorTree tree(build_schedule(desk_request(), 10));
    GapReport rep = tree.verify_gap(6);
    CHECK(rep.ok);
    REQUIRE(rep.levels.size() == 7);
    std::vector<long long> w = widths(tree.config(), 6);
    std::uint64_t expect = 1;
    for (int L = 0; L <= 6; ++L) {
        CHECK(rep.levels[static_cast<std::size_t>(L)].level == L);
        CHECK(rep.levels[static_cast<std::size_t>(L)].cylinders == expect);
        if (L < 6) expect *= static_cast<std::uint64_t>(w[static_cast<std::size_t>(L)]);
    }
    CHECK(std::isinf(rep.levels[0].min_ratio));
    // By hand at level 1: hulls [1/4,4/13), [1/3,4/9), [1/2,4/5); the tight
    // pair is 3-vs-2 with gap 1/39 against length 3/52, ratio 3 * 52/(3*39).
    CHECK(rep.levels[1].min_ratio == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    // Independent recheck of level 2 in exact rationals: rebuild each hull
    // from its word, order spatially, and redo the gap comparisons.
    struct Hull {
        CylinderInterval iv;
    };
    std::vector<Hull> hulls;
    for (long long a = 1; a <= 3; ++a)
        for (long long b = 1; b <= 3; ++b) {
            Convergent c = continuants(DigitWord{a, b});
            hulls.push_back({cylinder_range_interval(c, 27, 53)});
        }
    std::sort(hulls.begin(), hulls.end(), [](const Hull& x, const Hull& y) {
        return x.iv.left_num * y.iv.left_den < y.iv.left_num * x.iv.left_den;
    });
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < hulls.size(); ++i) {
        const CylinderInterval& prev = hulls[i - 1].iv;
        const CylinderInterval& cur = hulls[i].iv;
        BigInt gn = cur.left_num * prev.right_den - prev.right_num * cur.left_den;
        BigInt gd = cur.left_den * prev.right_den;
        REQUIRE(gn > 0);
        bool prev_narrower = prev.len_num * cur.len_den <= cur.len_num * prev.len_den;
        const BigInt& mn = prev_narrower ? prev.len_num : cur.len_num;
        const BigInt& md = prev_narrower ? prev.len_den : cur.len_den;
        CHECK(gn * 3 * md >= mn * gd);
        double ratio = 3.0 * gn.convert_to<double>() * md.convert_to<double>() /
                       (gd.convert_to<double>() * mn.convert_to<double>());
        min_ratio = std::min(min_ratio, ratio);
    }
    CHECK(rep.levels[2].min_ratio == doctest::Approx(min_ratio).epsilon(1e-9));
}

TEST_CASE("length brackets hold at every node, with the hull length recomputed") {
    CantorTree tree(build_schedule(desk_request(), 10));
    LengthReport rep = tree.verify_lengths(6);
    CHECK(rep.ok);
    CHECK(rep.nodes == 25528);
    CHECK(rep.constant_violations == 0);
    CHECK(rep.exponent_violations == 0);
    CHECK(rep.worst_log_margin > 0.0);
    // The pinch point is the smallest-growth-digit corner of the first block.
    CHECK(rep.worst == DigitWord{3, 1, 53, 15});
    CHECK(rep.worst_log_margin == doctest::Approx(0.172691665218).epsilon(1e-9));

    // Independent bracket audit: recompute every hull length from the
    // closed form and check it against the node's published bracket.
    const CantorConfig& cfg = tree.config();
    for (int level = 0; level <= 5; ++level) {
        const PositionInfo& below = cfg.at(level + 1);
        tree.expand_level(level, [&](const MeasureNode& node) {
            Convergent c = continuants(node.word);
            BigInt num, den;
            hull_closed_form(c, below.digit_lo, below.digit_hi, num, den);
            double ln_len = std::log(num.convert_to<double>()) - std::log(den.convert_to<double>());
            CHECK(ln_len >= node.log_len_lo - 1e-9);
            CHECK(ln_len <= node.log_len_hi + 1e-9);
            // Block bracket is pure continuant: q^{-2} above, q^{-2}/8 below.
            if (node.kind == NodeKind::block_interior) {
                CHECK(node.log_len_hi == doctest::Approx(-2.0 * c.log_q).epsilon(1e-12));
                CHECK(node.log_len_lo ==
                      doctest::Approx(-2.0 * c.log_q - 3.0 * std::log(2.0)).epsilon(1e-12));
            }
        });
    }
}

TEST_CASE("local dimension exponents settle above the target") {
    CantorTree tree(build_schedule(desk_request(), 10));
    HolderReport rep = tree.holder_report(8);
    const CantorConfig& cfg = tree.config();
    double d_min = std::min(cfg.d[0], cfg.d[1]);
    CHECK(rep.tau == doctest::Approx(d_min / 2.0).epsilon(1e-15));  // eps = 1
    CHECK(rep.tau == doctest::Approx(0.220012416185).epsilon(1e-9));
    CHECK(rep.burn_in == 4);  // N + m
    CHECK(rep.ok);
    CHECK(rep.median_beyond_burn_in >= rep.tau - 0.05);
    CHECK(rep.median_beyond_burn_in == doctest::Approx(0.541783081049).epsilon(1e-9));
    CHECK(rep.inf_beyond_burn_in == doctest::Approx(0.471305284309).epsilon(1e-9));
    REQUIRE(rep.levels.size() == 9);
    for (const HolderLevelStat& stat : rep.levels) {
        CHECK(stat.min <= stat.median);
        CHECK(stat.median <= stat.max);
        if (stat.level > 0) {
            CHECK(stat.min > 0.0);
            CHECK(stat.max < 2.0);
        }
    }
}

TEST_CASE("holder report skips padding levels") {
    CantorRequest req;
    req.alphabet_max = 2;
    req.block_len = 2;
    req.profile.A = {3.0};
    req.mode = CantorMode::padded;
    req.n_k = {5};
    CantorTree tree(build_schedule(req, 8));
    CHECK(tree.config().at(3).kind == NodeKind::padding);
    CHECK(tree.config().at(4).kind == NodeKind::padding);
    HolderReport rep = tree.holder_report(6);
    CHECK(rep.levels.size() == 5);
    for (const HolderLevelStat& stat : rep.levels) {
        CHECK(stat.level != 3);
        CHECK(stat.level != 4);
    }

    // Padding is measure-transparent, so consistency still closes.
    ConsistencyReport cons = tree.verify_consistency(6);
    CHECK(cons.ok);
    GapReport gaps = tree.verify_gap(6);
    CHECK(gaps.ok);
    CHECK(gaps.levels[3].cylinders == gaps.levels[2].cylinders);
}

TEST_CASE("walks respect the node budget and the word-table cap") {
    CantorRequest req = desk_request();
    req.budget.max_nodes = 1000;
    CantorTree tree(build_schedule(req, 10));
    try {
        tree.verify_consistency(6);
        FAIL("budget not enforced");
    } catch (const BudgetError& e) {
        CHECK(e.required_nodes == 25527);  // all non-root nodes through level 6
        CHECK(e.budget_nodes == 1000);
    }

    CantorRequest wide;
    wide.alphabet_max = 50;
    wide.block_len = 4;
    wide.profile.A = {3.0};
    wide.blocks = 1;
    CantorTree big(build_schedule(wide));
    try {
        big.expand_level(0, [](const MeasureNode&) {});
        FAIL("word-table cap not enforced");
    } catch (const BudgetError& e) {
        CHECK(e.required_nodes == 6250000);  // 50^4 block words
    }

    CantorTree deep(build_schedule(desk_request(), 6));
    CHECK_THROWS_AS(deep.verify_lengths(7), Error);  // past the horizon
}

TEST_CASE("level expansion is deterministic and spatially ordered") {
    CantorTree tree(build_schedule(desk_request(), 10));
    for (int level : {1, 2, 3}) {
        std::vector<MeasureNode> first, second;
        tree.expand_level(level, [&](const MeasureNode& n) { first.push_back(n); });
        tree.expand_level(level, [&](const MeasureNode& n) { second.push_back(n); });
        REQUIRE(first.size() == second.size());
        for (std::size_t i = 0; i < first.size(); ++i) {
            CHECK(first[i].word == second[i].word);
            CHECK(first[i].log_len_lo == second[i].log_len_lo);
            CHECK(first[i].log_mu == second[i].log_mu);
        }
        // Left-to-right means strictly increasing full-cylinder left edges.
        for (std::size_t i = 1; i < first.size(); ++i) {
            CylinderInterval a = cylinder_interval(first[i - 1].word);
            CylinderInterval b = cylinder_interval(first[i].word);
            CHECK(a.left_num * b.left_den < b.left_num * a.left_den);
        }
    }
    // Kinds mirror the position table one level below.
    tree.expand_level(2, [&](const MeasureNode& n) {
        CHECK(n.kind == NodeKind::growth_digit);
        CHECK(n.growth_index == 0);
    });
    tree.expand_level(3, [&](const MeasureNode& n) {
        CHECK(n.kind == NodeKind::growth_digit);
        CHECK(n.growth_index == 1);
    });
}

TEST_CASE("growth digits split the measure uniformly") {
    CantorRequest req;
    req.alphabet_max = 2;
    req.block_len = 1;
    req.profile.A = {3.0};
    req.mode = CantorMode::padded;
    req.n_k = {1};
    CantorTree tree(build_schedule(req));
    CHECK(tree.config().at(1).digit_lo == 3);
    CHECK(tree.config().at(1).digit_hi == 5);

    std::vector<MeasureNode> level1;
    tree.expand_level(1, [&](const MeasureNode& n) { level1.push_back(n); });
    REQUIRE(level1.size() == 3);
    // Root has even order, so children stream in descending digit order.
    CHECK(level1[0].word == DigitWord{5});
    CHECK(level1[1].word == DigitWord{4});
    CHECK(level1[2].word == DigitWord{3});
    for (const MeasureNode& n : level1)
        CHECK(n.log_mu[0] == doctest::Approx(-std::log(3.0)).epsilon(1e-15));
}

TEST_CASE("dump emits one tab-separated record per node") {
    CantorRequest req;
    req.alphabet_max = 2;
    req.block_len = 1;
    req.profile.A = {3.0};
    req.mode = CantorMode::padded;
    req.n_k = {1};
    CantorTree tree(build_schedule(req));
    std::ostringstream os;
    tree.dump(os, 1);
    std::istringstream is(os.str());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        rows.push_back(fields);
    }
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) REQUIRE(row.size() == 5);
    CHECK(rows[0][0] == "-");
    CHECK(rows[0][1] == "growth-digit(0)");
    CHECK(rows[1][0] == "5");
    CHECK(rows[2][0] == "4");
    CHECK(rows[3][0] == "3");
    CHECK(rows[1][1] == "block-interior");
    // Root bracket: hull of digits 3..5 lies within [1/18, 1] of the unit
    // cylinder, so lo = -ln 18 and hi = 0.
    CHECK(std::stod(rows[0][2]) == doctest::Approx(-std::log(18.0)).epsilon(1e-10));
    CHECK(std::stod(rows[0][3]) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::stod(rows[0][4]) == doctest::Approx(0.0).epsilon(1e-15));
    for (int i = 1; i <= 3; ++i)
        CHECK(std::stod(rows[static_cast<std::size_t>(i)][4]) ==
              doctest::Approx(-std::log(3.0)).epsilon(1e-10));
}
