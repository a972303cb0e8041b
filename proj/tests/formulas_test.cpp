#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cfdim/formulas.hpp"

using namespace cfdim;
using BigInt = boost::multiprecision::cpp_int;

namespace {

// Oracle: the product-exponent recursion linearizes in y = 1/f, where
// y_{k+1} = a y_k + 1/s with a = (1-s)/s.  Solving that gives a closed form
// the iterative implementation never touches.
double f_closed(int m, double s) {
    if (m == 1) return s;
    double a = (1.0 - s) / s;
    double geo = std::fabs(a - 1.0) < 1e-13 ? static_cast<double>(m - 1)
                                            : (std::pow(a, m - 1) - 1.0) / (a - 1.0);
    return s / (std::pow(a, m - 1) + geo);
}

// Oracle: threshold exponent as the raw quotient, removable pole and all.
double theta_raw(int m, double t) {
    double u = 1.0 - t;
    return (std::pow(t, m) - t * std::pow(u, m - 1)) / (std::pow(t, m) - std::pow(u, m));
}

}  // namespace

TEST_CASE("iterated product exponent matches its closed form") {
    for (int m = 1; m <= 8; ++m) {
        for (double s : {0.05, 0.2, 0.4, 0.5, 0.55, 0.7, 0.85, 1.0, 1.2}) {
            CAPTURE(m);
            CAPTURE(s);
            CHECK(f_m(m, s) == doctest::Approx(f_closed(m, s)).epsilon(1e-12));
        }
    }
    CHECK(f_m(3, 0.5) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));  // 1/(2m) at s = 1/2
    CHECK_THROWS_AS(f_m(0, 0.5), Error);
    CHECK_THROWS_AS(f_m(2, -0.1), Error);
}

TEST_CASE("two-fold product exponent is the square") {
    for (int i = 1; i <= 50; ++i) {
        double s = 0.02 * i;
        CHECK(std::fabs(f_m(2, s) - s * s) <= 1e-14);
    }
}

TEST_CASE("threshold exponent matches the raw quotient away from one half") {
    for (int m = 2; m <= 6; ++m) {
        for (double t : {0.51, 0.55, 0.6, 0.7, 0.8, 0.9, 0.97}) {
            CAPTURE(m);
            CAPTURE(t);
            CHECK(theta_m(m, t) == doctest::Approx(theta_raw(m, t)).epsilon(1e-12));
        }
    }
    // m = 3 collapses to an explicit rational function.
    for (double t : {0.55, 0.66, 0.8})
        CHECK(theta_m(3, t) == doctest::Approx(t / (1.0 - t + t * t)).epsilon(1e-14));
}

TEST_CASE("threshold exponent at the removable point") {
    for (int m = 2; m <= 6; ++m) {
        double want = (m - 1.0) / m;
        CHECK(theta_m(m, 0.5) == doctest::Approx(want).epsilon(1e-15));
        // The cancellation-free form is continuous straight through.
        CHECK(std::fabs(theta_m(m, 0.5 + 1e-9) - want) <= 1e-7);
        CHECK(std::fabs(theta_m(m, 0.5 - 1e-9) - want) <= 1e-7);
    }
    CHECK_THROWS_AS(theta_m(1, 0.6), Error);
    CHECK_THROWS_AS(theta_m(3, 1.0), Error);
}

TEST_CASE("identity threshold for adjacent blocks") {
    for (int i = 1; i <= 50; ++i) {
        double t = 0.5 + 0.01 * i * 0.98;  // (0.5, 0.99]
        CHECK(std::fabs(theta_m(2, t) - t) <= 1e-12);
    }
}

TEST_CASE("equalizing exponents: unit sum and geometric decay") {
    for (int m = 1; m <= 5; ++m) {
        for (double t : {0.55, 0.7, 0.9}) {
            std::vector<double> e = equalizing_exponents(m, t);
            REQUIRE(static_cast<int>(e.size()) == m);
            double sum = 0.0;
            for (double ei : e) {
                CHECK(ei > 0.0);
                sum += ei;
            }
            CHECK(std::fabs(sum - 1.0) <= 1e-15);
            double ratio = (1.0 - t) / t;
            for (int i = 0; i + 1 < m; ++i)
                CHECK(e[static_cast<std::size_t>(i + 1)] / e[static_cast<std::size_t>(i)] ==
                      doctest::Approx(ratio).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(equalizing_exponents(3, 0.5), Error);
    CHECK_THROWS_AS(equalizing_exponents(3, 0.3), Error);
}

TEST_CASE("equalizing profile: bases multiply to B and follow the power chain") {
    const double B = 16.0, t = 0.7;
    GrowthProfile p = equalizing_profile(B, 3, t);
    REQUIRE(p.m() == 3);
    for (double ci : p.c) CHECK(ci == 1.0);
    CHECK(p.beta(2) == doctest::Approx(B).epsilon(1e-12));
    double ratio = (1.0 - t) / t;
    double expo = ratio;
    for (int k = 1; k < 3; ++k) {
        CHECK(std::log(p.A[static_cast<std::size_t>(k)]) ==
              doctest::Approx(expo * std::log(p.A[0])).epsilon(1e-10));
        expo *= ratio;
    }

    SolveOptions opt;
    GrowthProfile solved = equalizing_profile(B, 3, opt);
    GrowthProfile manual = equalizing_profile(B, 3, product_dimension(B, 3, opt).value);
    CHECK(solved.A == manual.A);
}

TEST_CASE("equalized windows share one dimension, the product-family one") {
    SolveOptions opt;
    opt.extrapolate = Extrapolation::aitken;
    for (int m : {2, 3}) {
        for (double B : {4.0, 16.0}) {
            CAPTURE(m);
            CAPTURE(B);
            GrowthProfile p = equalizing_profile(B, m, opt);
            ProfileDimensions pd = profile_dimensions(p, opt);
            double lo = pd.d[0].value, hi = pd.d[0].value;
            for (const auto& r : pd.d) {
                CHECK(r.status == RootStatus::interior);
                lo = std::min(lo, r.value);
                hi = std::max(hi, r.value);
            }
            CHECK(hi - lo <= 1e-4);
            CHECK(std::fabs(pd.min_value - product_dimension(B, m, opt).value) <= 1e-4);
        }
    }
}

TEST_CASE("weighted exponent formula") {
    for (int i = 1; i <= 50; ++i) {
        double s = 0.02 * i;
        CHECK(std::fabs(weighted_f(1.0, 1.0, s) - s * s) <= 1e-14);
    }
    // Equal weights collapse to s^2/t below the switch and s/t above it.
    for (double t : {0.5, 1.0, 2.0}) {
        CHECK(weighted_f(t, t, 0.8) == doctest::Approx(0.64 / t).epsilon(1e-14));
        CHECK(weighted_f(t, t, 1.3) == doctest::Approx(1.3 / t).epsilon(1e-14));
    }
    // The switch margin is linear in s and vanishes where the max kicks in.
    CHECK(weighted_regime(2.0, 1.0, 0.3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(weighted_regime(2.0, 1.0, 0.9) == doctest::Approx(0.5).epsilon(1e-15));
    // Continuity across the switch point s = t0/(2 t0 - t1).
    double t0 = 1.0, t1 = 2.0;
    double s_switch = 2.0 / 3.0;  // root of s/t1 = (2s-1)/t0 at these weights
    REQUIRE(std::fabs(weighted_regime(t0, t1, s_switch)) <= 1e-15);
    CHECK(std::fabs(weighted_f(t0, t1, s_switch - 1e-9) - weighted_f(t0, t1, s_switch + 1e-9)) <= 1e-8);
    CHECK(weighted_f(2.0, 1.0, 0.0) == 0.0);
    CHECK_THROWS_AS(weighted_f(0.0, 1.0, 0.5), Error);
}

TEST_CASE("family reductions collapse to each other") {
    SolveOptions opt;
    for (double B : {2.0, 4.0}) {
        CHECK(product_dimension(B, 1, opt).value == dim_single(B, opt).value);
        // f_{1,1} = f_2, so the weighted and two-fold product roots coincide.
        CHECK(std::fabs(weighted_dimension(B, 1.0, 1.0, opt).value -
                        product_dimension(B, 2, opt).value) <= 1e-7);
        // -(3s-1) ln B is literally the window potential (B^2, B).
        CHECK(triple_product_dimension(B, opt).value == dim_two_param(B * B, B, opt).value);
    }
    CHECK(triple_product_dimension(1.0).value == 1.0);
    CHECK_THROWS_AS(product_dimension(1.0, 2), Error);
    CHECK_THROWS_AS(weighted_dimension(4.0, 1.0, 2.0), Error);  // weights out of order
    CHECK_THROWS_AS(triple_product_dimension(0.9), Error);
}

TEST_CASE("product dimension rises with the block count") {
    SolveOptions opt;
    opt.alphabet_ladder = {40, 80};
    double prev = 0.0;
    for (int m = 1; m <= 4; ++m) {
        double d = product_dimension(4.0, m, opt).value;
        CHECK(d > prev);
        CHECK(d < 1.0);
        prev = d;
    }
}

TEST_CASE("doubly exponential growth pins the dimension to 1/(1+b)") {
    CHECK(doubly_exponential_dim(2.0) == 1.0 / 3.0);
    CHECK(doubly_exponential_dim(4.0) == 0.2);
    CHECK_THROWS_AS(doubly_exponential_dim(1.0), Error);
    CHECK_THROWS_AS(doubly_exponential_dim(0.5), Error);
}

TEST_CASE("window classifier: contradictory growth conditions") {
    for (int m : {2, 3}) {
        FmClassification c = classify_window(4.0, 2.0, m);
        CHECK(c.regime == FmCase::empty);
        CHECK_FALSE(c.dimension.has_value());
        CHECK_FALSE(c.witness.has_value());
        CHECK(c.witness_checks.empty());
        // ln 2 sits exactly at half of ln 4: the emptiness edge.
        CHECK(c.boundary);
        CHECK(c.g_dimension.has_value());
    }
    FmClassification inside = classify_window(4.0, 1.5, 2);
    CHECK(inside.regime == FmCase::empty);
    CHECK_FALSE(inside.boundary);
    CHECK_FALSE(inside.g_dimension.has_value());
    CHECK_THROWS_AS(classify_window(1.0, 2.0, 2), Error);
    CHECK_THROWS_AS(classify_window(4.0, 2.0, 1), Error);
}

TEST_CASE("window classifier: wide window runs at the product-family root") {
    SolveOptions aitken;
    aitken.extrapolate = Extrapolation::aitken;
    ClassifyOptions opt;
    opt.solve = aitken;
    FmClassification c = classify_window(4.0, 3.99, 2, opt);
    CHECK(c.regime == FmCase::t_regime);
    CHECK_FALSE(c.boundary);
    REQUIRE(c.dimension.has_value());
    CHECK(std::fabs(*c.dimension - product_dimension(4.0, 2, aitken).value) <= 1e-4);
    CHECK(c.theta == doctest::Approx(c.t).epsilon(1e-15));  // m = 2
    REQUIRE(c.witness.has_value());
    CHECK(c.witness->m() == 2);
    REQUIRE(c.witness_checks.size() == 3);
    for (const LinearCheck& chk : c.witness_checks) {
        CHECK(chk.eventually);
        CHECK(chk.satisfied_from >= 1);
    }
}

TEST_CASE("window classifier: narrow window runs at the two-parameter root") {
    FmClassification c = classify_window(16.0, 4.5, 2);
    REQUIRE(c.regime == FmCase::g_regime);  // threshold 16^t is above 4.5 here
    CHECK_FALSE(c.boundary);
    REQUIRE(c.dimension.has_value());
    CHECK(*c.dimension == dim_two_param(16.0, 4.5).value);
    CHECK(std::log(4.5) > 0.5 * std::log(16.0));  // strictly inside the nonempty band
    CHECK(std::log(4.5) < c.log_threshold);
    REQUIRE(c.witness.has_value());
    for (const LinearCheck& chk : c.witness_checks) {
        CHECK(chk.eventually);
        CHECK(chk.satisfied_from >= 1);
    }
}

TEST_CASE("window classifier: both regime roots meet at the threshold") {
    SolveOptions aitken;
    aitken.extrapolate = Extrapolation::aitken;
    double t = product_dimension(4.0, 2, aitken).value;
    double B2_star = std::exp(theta_m(2, t) * std::log(4.0));

    ClassifyOptions opt;
    opt.solve = aitken;
    FmClassification c = classify_window(4.0, B2_star, 2, opt);
    CHECK(c.boundary);
    REQUIRE(c.t_dimension.has_value());
    REQUIRE(c.g_dimension.has_value());
    CHECK(std::fabs(*c.t_dimension - *c.g_dimension) <= 2e-4);
}

TEST_CASE("no adversarial digit sequence beats the emptiness chain") {
    // Window B2 = 19/10, B1 = B2^2 = 361/100, handled in exact integers:
    // digits are drawn to push the sliding (m-1)-blocks as close to the
    // ceiling a_{n+1}...a_{n+m-1} < B2^n as integers allow, half the time
    // taking the ceiling itself.  The overlapping-block bound then forces
    // a_n...a_{n+m-1} < B1^n for every n >= 2, whatever the draws did.
    const int L = 40;
    const long long digit_cap = 1000000;
    std::vector<BigInt> pow19(2 * L + 1), pow10(2 * L + 1);
    pow19[0] = 1;
    pow10[0] = 1;
    for (int i = 1; i <= 2 * L; ++i) {
        pow19[static_cast<std::size_t>(i)] = pow19[static_cast<std::size_t>(i - 1)] * 19;
        pow10[static_cast<std::size_t>(i)] = pow10[static_cast<std::size_t>(i - 1)] * 10;
    }

    for (int m : {2, 3}) {
        std::mt19937_64 rng(0xC0FFEEull + static_cast<unsigned long long>(m));
        long long counterexamples = 0, near_misses = 0;
        for (int trial = 0; trial < 5000; ++trial) {
            std::vector<long long> a(static_cast<std::size_t>(L + 1), 0);
            a[1] = static_cast<long long>(rng() % 1000000) + 1;
            for (int j = 2; j <= L; ++j) {
                // Every sliding block through position j caps the draw.
                BigInt amax = -1;
                for (int n = std::max(1, j - m + 1); n <= j - 1; ++n) {
                    BigInt prod = 1;
                    for (int i = n + 1; i < j; ++i) prod *= a[static_cast<std::size_t>(i)];
                    BigInt cap = (pow19[static_cast<std::size_t>(n)] - 1) /
                                 (pow10[static_cast<std::size_t>(n)] * prod);
                    if (amax < 0 || cap < amax) amax = cap;
                }
                REQUIRE(amax >= 1);
                long long cap_ll = amax > digit_cap ? digit_cap : amax.convert_to<long long>();
                // Half the draws take the ceiling, a quarter take 1 (a tiny
                // overlap digit frees the neighbours to grow), the rest roam.
                switch (rng() % 4) {
                    case 0: a[static_cast<std::size_t>(j)] = 1; break;
                    case 1:
                        a[static_cast<std::size_t>(j)] = static_cast<long long>(rng() % cap_ll) + 1;
                        break;
                    default: a[static_cast<std::size_t>(j)] = cap_ll; break;
                }
            }
            // Exact verdict on every full m-block from n = 2 on.  The sup of
            // the block product over admissible sequences is B1^n/B2 for
            // m = 2 but only B1^{n-1} for m = 3 (the overlap digit is taxed
            // twice), so the near-miss margin is regime dependent.
            const int margin = m == 2 ? 2 : 4;
            for (int n = 2; n + m - 1 <= L; ++n) {
                BigInt prod = 1;
                for (int i = n; i <= n + m - 1; ++i) prod *= a[static_cast<std::size_t>(i)];
                BigInt lhs = prod * pow10[static_cast<std::size_t>(2 * n)];
                const BigInt& rhs = pow19[static_cast<std::size_t>(2 * n)];
                if (lhs >= rhs) ++counterexamples;
                if (lhs * margin >= rhs) ++near_misses;
            }
        }
        CAPTURE(m);
        CHECK(counterexamples == 0);
        CHECK(near_misses > 0);  // the draws genuinely crowd the ceiling
    }
}
