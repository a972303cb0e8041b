#include "cfdim/pressure.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <utility>

#include "cfdim/logsum.hpp"

namespace cfdim {

Offset Offset::affine(double alpha, double beta) {
    Offset h;
    h.affine_ = true;
    h.alpha_ = alpha;
    h.beta_ = beta;
    return h;
}

Offset Offset::custom(std::function<double(double)> fn) {
    Offset h;
    h.affine_ = false;
    h.fn_ = std::move(fn);
    return h;
}

Offset offset_single(double B) {
    if (!(B > 0.0)) throw Error("offset_single: B must be positive");
    return Offset::affine(-std::log(B), 0.0);
}

Offset offset_two_param(double B1, double B2) {
    if (!(B1 > 0.0) || !(B2 > 0.0)) throw Error("offset_two_param: parameters must be positive");
    // -s ln B1 + (1 - s) ln B2
    return Offset::affine(-std::log(B1) - std::log(B2), std::log(B2));
}

namespace {

// Depth-major, then s-major accumulators for one leading-digit chunk.  The
// chunk decomposition is part of the definition of the sum: chunks are always
// reduced in ascending digit order, so the result does not depend on how the
// chunks were scheduled.
void chunk_core_sums(int alphabet_max, int depth, long long lead, const std::vector<double>& two_s,
                     double anchor, std::vector<KahanSum>& acc) {
    const std::size_t n_s = two_s.size();
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(depth) + 1, 0);
    std::vector<ContinuantPair64> states(static_cast<std::size_t>(depth) + 1);
    int level = 1;
    digits[1] = static_cast<std::uint64_t>(lead);
    bool lead_done = false;
    while (level >= 1) {
        if (level == 1 && lead_done) break;
        if (level > 1 && digits[level] > static_cast<std::uint64_t>(alphabet_max)) {
            --level;
            if (level == 1) lead_done = true;
            else if (level >= 1) ++digits[level];
            continue;
        }
        ContinuantPair64 st = states[level - 1];
        if (!st.push(digits[level]))
            throw OverflowError("direct sum: continuant exceeds 64 bits; reduce depth or alphabet");
        states[level] = st;
        double log_q = std::log(static_cast<double>(st.q) + anchor * static_cast<double>(st.q_prev));
        KahanSum* row = acc.data() + static_cast<std::size_t>(level - 1) * n_s;
        for (std::size_t j = 0; j < n_s; ++j) row[j].add(std::exp(-two_s[j] * log_q));
        if (level < depth) {
            ++level;
            digits[level] = 1;
        } else if (level == 1) {
            lead_done = true;
        } else {
            ++digits[level];
        }
    }
}

}  // namespace

std::vector<std::vector<double>> direct_log_core_sums(int alphabet_max, int depth,
                                                      const std::vector<double>& s_values,
                                                      const DirectSumOptions& opt) {
    if (alphabet_max < 1) throw InvalidDigitError("alphabet_max must be >= 1");
    if (depth < 1) throw Error("direct_log_core_sums: depth must be >= 1");
    if (!(opt.anchor >= 0.0) || opt.anchor >= 1.0) throw Error("anchor must lie in [0, 1)");
    check_budget(static_cast<std::uint64_t>(alphabet_max), depth, opt.budget, "direct_log_core_sums");

    const std::size_t n_s = s_values.size();
    std::vector<double> two_s(n_s);
    for (std::size_t j = 0; j < n_s; ++j) two_s[j] = 2.0 * s_values[j];

    const std::size_t cells = static_cast<std::size_t>(depth) * n_s;
    std::vector<std::vector<KahanSum>> chunk(static_cast<std::size_t>(alphabet_max));

    unsigned workers = std::thread::hardware_concurrency();
    if (workers <= 1 || alphabet_max == 1) {
        for (long long lead = 1; lead <= alphabet_max; ++lead) {
            auto& acc = chunk[static_cast<std::size_t>(lead - 1)];
            acc.assign(cells, KahanSum{});
            chunk_core_sums(alphabet_max, depth, lead, two_s, opt.anchor, acc);
        }
    } else {
        std::atomic<long long> next{1};
        std::exception_ptr failure;
        std::mutex failure_mu;
        auto work = [&] {
            for (;;) {
                long long lead = next.fetch_add(1);
                if (lead > alphabet_max) return;
                try {
                    auto& acc = chunk[static_cast<std::size_t>(lead - 1)];
                    acc.assign(cells, KahanSum{});
                    chunk_core_sums(alphabet_max, depth, lead, two_s, opt.anchor, acc);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mu);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        unsigned n_threads = std::min<unsigned>(workers, static_cast<unsigned>(alphabet_max));
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    // Ascending-digit reduction, one compensated pass per cell.
    std::vector<std::vector<double>> out(n_s, std::vector<double>(static_cast<std::size_t>(depth)));
    for (std::size_t cell = 0; cell < cells; ++cell) {
        KahanSum total;
        for (long long lead = 1; lead <= alphabet_max; ++lead)
            total.add(chunk[static_cast<std::size_t>(lead - 1)][cell].value());
        std::size_t k = cell / n_s;
        std::size_t j = cell % n_s;
        out[j][k] = std::log(total.value());
    }
    return out;
}

PressureEstimate pressure_direct(const Potential& pot, int alphabet_max, int depth,
                                 const PressureDirectOptions& opt) {
    auto core = direct_log_core_sums(alphabet_max, depth, {pot.s}, opt.sums)[0];
    double h = pot.h(pot.s);

    PressureEstimate est;
    est.method = PressureMethod::direct_sum;
    est.alphabet_max = alphabet_max;
    est.depth = depth;
    est.ladder.resize(core.size());
    for (std::size_t k = 0; k < core.size(); ++k)
        est.ladder[k] = core[k] / static_cast<double>(k + 1) + h;
    int lo = std::max(opt.depth_min, 2);
    for (int k = lo; k <= depth; ++k)
        est.diffs.push_back(core[static_cast<std::size_t>(k - 1)] - core[static_cast<std::size_t>(k - 2)] + h);

    if (est.diffs.empty()) {
        est.value = est.ladder.back();
    } else if (opt.extrapolate == Extrapolation::aitken && est.diffs.size() >= 3) {
        est.value = aitken_last(est.diffs);
        est.extrapolated = true;
    } else {
        est.value = est.diffs.back();
    }
    return est;
}

}  // namespace cfdim
