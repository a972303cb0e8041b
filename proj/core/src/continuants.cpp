#include "cfdim/continuants.hpp"

#include <limits>
#include <numbers>

namespace cfdim {

double log_big(const BigInt& v) {
    if (v <= 0) throw Error("log_big: argument must be positive");
    // Values that fit a double convert exactly enough; wider values are
    // split into the top 64 bits and a power of two.
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(v)) + 1;
    if (bits <= 1000) {
        return std::log(v.convert_to<double>());
    }
    BigInt top = v >> (bits - 64);
    return std::log(top.convert_to<double>()) + static_cast<double>(bits - 64) * std::numbers::ln2_v<double>;
}

Convergent continuants(const DigitWord& word) {
    Convergent c;
    for (long long a : word) c.push(a);
    return c;
}

namespace {

// x(t) = (t p + p_prev) / (t q + q_prev) maps t in [a, a+1] onto the cylinder
// of the word extended by digit a; t = digit_lo and t = digit_hi + 1 give the
// outer endpoints of a contiguous digit range.
void mobius_endpoint(const Convergent& c, long long t, BigInt& num, BigInt& den) {
    num = t * c.p + c.p_prev;
    den = t * c.q + c.q_prev;
}

}  // namespace

CylinderInterval cylinder_interval(const DigitWord& word) {
    Convergent c = continuants(word);
    CylinderInterval iv;
    // Endpoints p/q and (p + p')/(q + q'); for even order the cylinder is
    // [p/q, (p+p')/(q+q')), for odd order ((p+p')/(q+q'), p/q].
    BigInt mid_num = c.p + c.p_prev;
    BigInt mid_den = c.q + c.q_prev;
    bool even = word.size() % 2 == 0;
    if (even) {
        iv.left_num = c.p;
        iv.left_den = c.q;
        iv.right_num = mid_num;
        iv.right_den = mid_den;
        iv.left_closed = true;
        iv.right_closed = false;
    } else {
        iv.left_num = mid_num;
        iv.left_den = mid_den;
        iv.right_num = c.p;
        iv.right_den = c.q;
        iv.left_closed = false;
        iv.right_closed = true;
    }
    iv.len_num = 1;
    iv.len_den = c.q * mid_den;
    return iv;
}

CylinderInterval cylinder_range_interval(const Convergent& c, long long digit_lo, long long digit_hi) {
    if (digit_lo < 1 || digit_hi < digit_lo) throw InvalidDigitError("cylinder_range_interval: empty or invalid digit range");
    CylinderInterval iv;
    BigInt a_num, a_den, b_num, b_den;
    mobius_endpoint(c, digit_lo, a_num, a_den);
    mobius_endpoint(c, digit_hi + 1, b_num, b_den);
    // The Mobius map is decreasing in t for even |word| and increasing for
    // odd, matching the sub-cylinder ordering; orient by a direct compare.
    bool a_left = a_num * b_den < b_num * a_den;
    if (a_left) {
        iv.left_num = a_num;   iv.left_den = a_den;
        iv.right_num = b_num;  iv.right_den = b_den;
    } else {
        iv.left_num = b_num;   iv.left_den = b_den;
        iv.right_num = a_num;  iv.right_den = a_den;
    }
    // Every child cylinder is closed at its t = digit end and open at
    // t = digit + 1, for either parity, and internal junction points are
    // absorbed by the next child; so the union closes at t = digit_lo and
    // stays open at t = digit_hi + 1.
    iv.left_closed = a_left;
    iv.right_closed = !a_left;
    // Length |x(lo) - x(hi+1)| = (hi + 1 - lo) / (den_lo * den_hi1) since
    // |p q' - q p'| = 1 propagates through the Mobius map.
    iv.len_num = digit_hi + 1 - digit_lo;
    iv.len_den = a_den * b_den;
    return iv;
}

}  // namespace cfdim
