#include "cfdim/enumerate.hpp"

#include <cstdlib>
#include <string>

namespace cfdim {

std::uint64_t EnumerationBudget::default_max_nodes() {
    static const std::uint64_t cached = [] {
        constexpr std::uint64_t fallback = std::uint64_t{1} << 28;
        const char* env = std::getenv("CFDIM_NODE_BUDGET");
        if (env == nullptr || *env == '\0') return fallback;
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v == 0) return fallback;
        return static_cast<std::uint64_t>(v);
    }();
    return cached;
}

std::uint64_t word_count(std::uint64_t alphabet_max, int depth) {
    std::uint64_t n = 1;
    for (int k = 0; k < depth; ++k) {
        if (alphabet_max != 0 && n > std::numeric_limits<std::uint64_t>::max() / alphabet_max)
            return std::numeric_limits<std::uint64_t>::max();
        n *= alphabet_max;
    }
    return n;
}

void check_budget(std::uint64_t alphabet_max, int depth, const EnumerationBudget& budget,
                  const char* what) {
    if (budget.streaming) return;
    std::uint64_t n = word_count(alphabet_max, depth);
    if (n > budget.max_nodes)
        throw BudgetError(std::string(what) + ": enumeration needs " + std::to_string(n) +
                              " words, budget is " + std::to_string(budget.max_nodes) +
                              " (set CFDIM_NODE_BUDGET or request streaming)",
                          n, budget.max_nodes);
}

void enumerate_cylinders(int alphabet_max, int depth, const EnumerationBudget& budget,
                         const std::function<void(const DigitWord&, const Convergent&)>& visit) {
    if (alphabet_max < 1) throw InvalidDigitError("alphabet_max must be >= 1");
    if (depth < 1) return;
    check_budget(static_cast<std::uint64_t>(alphabet_max), depth, budget, "enumerate_cylinders");

    DigitWord word;
    word.reserve(static_cast<std::size_t>(depth));
    std::vector<Convergent> states(static_cast<std::size_t>(depth) + 1);
    auto descend = [&](auto&& self, int level) -> void {
        const Convergent& parent = states[static_cast<std::size_t>(level - 1)];
        for (long long a = 1; a <= alphabet_max; ++a) {
            Convergent c = parent;
            c.push(a);
            word.push_back(a);
            if (level == depth) {
                visit(word, c);
            } else {
                states[static_cast<std::size_t>(level)] = c;
                self(self, level + 1);
            }
            word.pop_back();
        }
    };
    descend(descend, 1);
}

}  // namespace cfdim
