#include <benchmark/benchmark.h>

#include <map>
#include <utility>
#include <vector>

#include "whyprov/closure.hpp"
#include "whyprov/engine.hpp"
#include "whyprov/generators.hpp"
#include "whyprov/provenance.hpp"

namespace {

using namespace whyprov;

// Transitive closure over a sparse random digraph: the classic recursive
// scenario. Sizes stay subcritical so the fixpoint does not blow up.
GeneratedInstance& graph_instance(std::size_t nodes, std::size_t edges) {
    static std::map<std::pair<std::size_t, std::size_t>, GeneratedInstance> cache;
    auto key = std::make_pair(nodes, edges);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, gen_transclosure(nodes, edges, 7)).first;
    }
    return it->second;
}

void BM_Fixpoint(benchmark::State& state) {
    GeneratedInstance& inst = graph_instance(static_cast<std::size_t>(state.range(0)),
                                             static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) {
        FixpointResult fix = fixpoint(inst.query.program, inst.db);
        benchmark::DoNotOptimize(fix.facts.size());
    }
}
BENCHMARK(BM_Fixpoint)->Args({200, 300})->Args({1000, 1200});

void BM_DownwardClosure(benchmark::State& state) {
    GeneratedInstance& inst = graph_instance(static_cast<std::size_t>(state.range(0)),
                                             static_cast<std::size_t>(state.range(1)));
    FixpointResult fix = fixpoint(inst.query.program, inst.db);
    std::vector<std::vector<Symbol>> tuples = answers(inst.query, inst.db);
    Fact goal{inst.query.answer_predicate, tuples.front()};
    for (auto _ : state) {
        Hypergraph gri = build_gri(inst.query.program, inst.db, fix);
        DownwardClosure dc = downward_closure(gri, goal);
        benchmark::DoNotOptimize(dc.graph.nodes().size());
    }
}
BENCHMARK(BM_DownwardClosure)->Args({200, 300})->Args({1000, 1200});

void BM_EnumerateFirstMembers(benchmark::State& state) {
    GeneratedInstance& inst = graph_instance(200, 300);
    std::vector<std::vector<Symbol>> tuples = answers(inst.query, inst.db);
    EnumerateOptions opts;
    opts.max_members = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        EnumerationResult r = enumerate(inst.query, inst.db, tuples.front(), opts);
        benchmark::DoNotOptimize(r.members.size());
    }
}
BENCHMARK(BM_EnumerateFirstMembers)->Arg(1)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
