#include <benchmark/benchmark.h>

#include "cfdim/cantor.hpp"
#include "cfdim/dimension.hpp"
#include "cfdim/pressure.hpp"
#include "cfdim/transfer_operator.hpp"

using namespace cfdim;

namespace {

// Word-tree walk speed of the direct pressure engine.  The item counter is
// the number of tree nodes, so the report reads directly as nodes/second.
void direct_core_sums(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    const int depth = static_cast<int>(state.range(1));
    std::vector<double> s = {1.0};
    std::uint64_t nodes = 0, width = 1;
    for (int k = 1; k <= depth; ++k) {
        width *= static_cast<std::uint64_t>(M);
        nodes += width;
    }
    for (auto _ : state) {
        auto sums = direct_log_core_sums(M, depth, s);
        benchmark::DoNotOptimize(sums);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(nodes) * state.iterations());
}

void leading_eigenvalue(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    for (auto _ : state) {
        double lam = transfer_eigenvalue(M, 1.0);
        benchmark::DoNotOptimize(lam);
    }
}

void single_base_root(benchmark::State& state) {
    SolveOptions opt;
    opt.alphabet_ladder = {static_cast<int>(state.range(0))};
    for (auto _ : state) {
        DimensionResult r = dim_single(4.0, opt);
        benchmark::DoNotOptimize(r.value);
    }
}

void tree_consistency(benchmark::State& state) {
    CantorRequest req;
    req.alphabet_max = 3;
    req.block_len = 2;
    req.profile.A = {3.0, 2.0};
    req.eps = 1.0;
    req.blocks = 2;
    const int depth = static_cast<int>(state.range(0));
    CantorTree tree(build_schedule(req, depth + 2));
    std::uint64_t nodes = 0;
    for (auto _ : state) {
        ConsistencyReport rep = tree.verify_consistency(depth);
        nodes = rep.internal_nodes;
        benchmark::DoNotOptimize(rep.max_rel_violation);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(nodes) * state.iterations());
}

void tree_exact_lengths(benchmark::State& state) {
    CantorRequest req;
    req.alphabet_max = 3;
    req.block_len = 2;
    req.profile.A = {3.0, 2.0};
    req.eps = 1.0;
    req.blocks = 2;
    const int depth = static_cast<int>(state.range(0));
    CantorTree tree(build_schedule(req, depth + 2));
    std::uint64_t nodes = 0;
    for (auto _ : state) {
        LengthReport rep = tree.verify_lengths(depth);
        nodes = rep.nodes;
        benchmark::DoNotOptimize(rep.worst_log_margin);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(nodes) * state.iterations());
}

}  // namespace

BENCHMARK(direct_core_sums)->Args({8, 6})->Args({8, 8})->Args({16, 6})->Unit(benchmark::kMillisecond);
BENCHMARK(leading_eigenvalue)->Arg(50)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(single_base_root)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(tree_consistency)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(tree_exact_lengths)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
