#include "stabnet/enforce.hpp"
#include "stabnet/game.hpp"
#include "stabnet/generators.hpp"
#include "stabnet/oracles.hpp"
#include "stabnet/sne.hpp"

#include <benchmark/benchmark.h>

using namespace stabnet;

namespace {

BroadcastGame dense_unit_game(int n) {
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) labels.push_back("n" + std::to_string(i));
    EdgeId id = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            edges.push_back({id++, i, j, Rational((i * 7 + j * 3) % 5 + 1, (i + j) % 3 + 1)});
    return BroadcastGame{Graph(std::move(labels), std::move(edges)), 0};
}

void BM_MinimumSpanningTree(benchmark::State& state) {
    BroadcastGame g = dense_unit_game(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(minimum_spanning_tree(g.graph, g.root));
}
BENCHMARK(BM_MinimumSpanningTree)->Arg(16)->Arg(48);

void BM_BroadcastLpSolve(benchmark::State& state) {
    auto inst = gen_cycle(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(min_subsidy(inst.game, inst.tree, SneMethod::lp3).total);
}
BENCHMARK(BM_BroadcastLpSolve)->Arg(10)->Arg(40);

void BM_RowGeneration(benchmark::State& state) {
    auto inst = gen_cycle(state.range(0));
    GeneralGame g = as_general(inst.game);
    State s = State::from_tree(inst.game, inst.tree);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_sne_rowgen(g, s).total);
}
BENCHMARK(BM_RowGeneration)->Arg(10);

void BM_EnforceFractional(benchmark::State& state) {
    auto inst = gen_cycle(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(enforce_fractional(inst.game, inst.tree).total);
}
BENCHMARK(BM_EnforceFractional)->Arg(100)->Arg(1000);

void BM_SpanningTreeEnumeration(benchmark::State& state) {
    BroadcastGame g = dense_unit_game(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        long count = enumerate_spanning_trees(g.graph, 10000000,
                                              [](std::span<const EdgeId>) { return true; });
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(BM_SpanningTreeEnumeration)->Arg(5)->Arg(6);

void BM_BroadcastEquilibriumCheck(benchmark::State& state) {
    CnfFormula f;
    f.num_vars = 3;
    f.clauses.push_back({1, 2, 3});
    SatInstance inst = gen_3sat4(f);
    SubsidyAssignment b(true);
    for (const auto& g : inst.gadgets)
        b.set(g.light_far, inst.game.graph.edge(g.light_far).w);
    for (auto _ : state)
        benchmark::DoNotOptimize(is_equilibrium_broadcast(inst.game, inst.tree, b).ok);
}
BENCHMARK(BM_BroadcastEquilibriumCheck);

} // namespace

BENCHMARK_MAIN();
