#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cfdim {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A digit outside [1, alphabet_max] (or a malformed word).
class InvalidDigitError : public Error {
public:
    using Error::Error;
};

/// An enumeration or expansion would visit more nodes than the configured budget.
class BudgetError : public Error {
public:
    BudgetError(const std::string& what, std::uint64_t required, std::uint64_t budget)
        : Error(what), required_nodes(required), budget_nodes(budget) {}
    std::uint64_t required_nodes;
    std::uint64_t budget_nodes;
};

/// Integer overflow in exact bookkeeping (continuants past the fast-path width,
/// growth ranges past the representable digit range, ...).
class OverflowError : public Error {
public:
    using Error::Error;
};

/// An iteration failed to reach its tolerance (power iteration, fixed point, ...).
class NumericError : public Error {
public:
    NumericError(const std::string& what, double residual_) : Error(what), residual(residual_) {}
    double residual;
};

/// A series or pressure request that diverges for the given parameters
/// (infinite alphabet with s <= 1/2).
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// Root bracketing failed: no sign change over the bracket.
class BracketError : public Error {
public:
    BracketError(const std::string& what, double value_lo, double value_hi)
        : Error(what), f_lo(value_lo), f_hi(value_hi) {}
    double f_lo;
    double f_hi;
};

/// The block-length threshold inequality cannot be met at the requested
/// constant; minimal_N is the smallest block length that would satisfy it.
class ThresholdError : public Error {
public:
    ThresholdError(const std::string& what, long long minimal_N)
        : Error(what), minimal_block_len(minimal_N) {}
    long long minimal_block_len;
};

/// An integer digit range [ceil(c*A^n), ceil(2c*A^n)) came out empty.
class DegenerateRangeError : public Error {
public:
    DegenerateRangeError(const std::string& what, int index, int block)
        : Error(what), growth_index(index), block_index(block) {}
    int growth_index;
    int block_index;
};

}  // namespace cfdim
