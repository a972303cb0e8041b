#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cfdim/errors.hpp"

namespace cfdim {

using BigInt = boost::multiprecision::cpp_int;

/// Partial quotients a_1, ..., a_n; every digit must be >= 1.
using DigitWord = std::vector<long long>;

/// Natural log of a positive big integer, via the top bits and the bit count.
double log_big(const BigInt& v);

/// Convergent state of a finite word under the continuant recursion
///   p_{n+1} = a_{n+1} p_n + p_{n-1},   q_{n+1} = a_{n+1} q_n + q_{n-1},
/// seeded with p_{-1} = 1, q_{-1} = 0, p_0 = 0, q_0 = 1.  The natural log of
/// q is maintained incrementally in floating point alongside the exact value.
struct Convergent {
    BigInt p = 0;
    BigInt p_prev = 1;
    BigInt q = 1;
    BigInt q_prev = 0;
    double log_q = 0.0;
    std::size_t length = 0;

    void push(long long digit) {
        if (digit < 1) throw InvalidDigitError("partial quotient must be >= 1");
        BigInt np = digit * p + p_prev;
        BigInt nq = digit * q + q_prev;
        p_prev.swap(p);
        q_prev.swap(q);
        p.swap(np);
        q.swap(nq);
        log_q = log_big(q);
        ++length;
    }
};

/// Runs the recursion over a whole word.
Convergent continuants(const DigitWord& word);

/// Fixed-width continuant pair for hot enumeration loops.  push() reports
/// whether the update stayed within 64 bits; on overflow the state is left
/// untouched so the caller can fall back or abort.
struct ContinuantPair64 {
    std::uint64_t q = 1;
    std::uint64_t q_prev = 0;

    bool push(std::uint64_t digit) {
        std::uint64_t hi, nq;
        hi = __builtin_mul_overflow(digit, q, &nq) ? 1 : 0;
        if (hi || __builtin_add_overflow(nq, q_prev, &nq)) return false;
        q_prev = q;
        q = nq;
        return true;
    }
    void pop(std::uint64_t digit) {
        std::uint64_t old_prev = q - digit * q_prev;
        q = q_prev;
        q_prev = old_prev;
    }
};

/// Exact half-open interval of points whose expansion starts with a given
/// word: endpoints are rationals, the closed side alternates with parity.
/// Fractions are kept unreduced; lengths and comparisons cross-multiply.
struct CylinderInterval {
    BigInt left_num, left_den;
    BigInt right_num, right_den;
    bool left_closed;   // even order: [p/q, (p+p')/(q+q'));  odd order: ((p+p')/(q+q'), p/q]
    bool right_closed;
    BigInt len_num, len_den;  // |I_n| = 1/(q_n (q_n + q_{n-1}))
};

/// Interval of the cylinder for `word`; the empty word yields [0, 1).
CylinderInterval cylinder_interval(const DigitWord& word);

/// Interval of the union of the one-digit-longer cylinders obtained by
/// appending any digit in [digit_lo, digit_hi] to the word with convergent
/// state `c` at order n.  The union is an interval because appended cylinders
/// are adjacent and ordered monotonically in the digit.
CylinderInterval cylinder_range_interval(const Convergent& c, long long digit_lo, long long digit_hi);

}  // namespace cfdim
