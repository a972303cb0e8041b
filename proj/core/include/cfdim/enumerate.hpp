#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "cfdim/continuants.hpp"
#include "cfdim/errors.hpp"

namespace cfdim {

/// Node budget for tree walks.  An enumeration refuses up front when the word
/// count would exceed max_nodes, unless streaming mode was requested by the
/// caller.  CFDIM_NODE_BUDGET overrides the default.
struct EnumerationBudget {
    std::uint64_t max_nodes = default_max_nodes();
    bool streaming = false;

    static std::uint64_t default_max_nodes();
    static EnumerationBudget from_env() { return EnumerationBudget{}; }
};

/// M^depth with saturation at uint64 max.
std::uint64_t word_count(std::uint64_t alphabet_max, int depth);

/// Throws BudgetError unless the enumeration fits the budget.
void check_budget(std::uint64_t alphabet_max, int depth, const EnumerationBudget& budget,
                  const char* what);

/// Depth-first walk over all words with digits in [1, alphabet_max], calling
/// the visitor at every node in lexicographic order:
///   visit(digits, length, pair)  with pair the 64-bit continuant state.
/// The fast path for pressure sums; throws OverflowError if a continuant
/// leaves 64 bits.
template <class Visit>
void walk_words_u64(int alphabet_max, int depth, Visit&& visit) {
    if (alphabet_max < 1) throw InvalidDigitError("alphabet_max must be >= 1");
    if (depth < 1) return;
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(depth) + 1, 0);
    std::vector<ContinuantPair64> states(static_cast<std::size_t>(depth) + 1);
    int level = 1;
    digits[1] = 1;
    while (level >= 1) {
        if (digits[level] > static_cast<std::uint64_t>(alphabet_max)) {
            --level;
            if (level >= 1) ++digits[level];
            continue;
        }
        ContinuantPair64 st = states[level - 1];
        if (!st.push(digits[level])) throw OverflowError("continuant exceeds 64 bits; reduce depth or alphabet");
        states[level] = st;
        visit(digits.data() + 1, level, st);
        if (level < depth) {
            ++level;
            digits[level] = 1;
        } else {
            ++digits[level];
        }
    }
}

/// Exact-arithmetic enumeration of all cylinders of the given order in
/// lexicographic order: visit(word, convergent).  Budget-guarded.
void enumerate_cylinders(int alphabet_max, int depth, const EnumerationBudget& budget,
                         const std::function<void(const DigitWord&, const Convergent&)>& visit);

}  // namespace cfdim
