// Microbenchmarks for the heavy pipeline stages: graph construction from a
// label map, the centrality measures, the motif census, and one forward
// pass of the classifier. Fixtures are synthesized deterministically so
// results are comparable across runs.

#include <benchmark/benchmark.h>

#include "nacnet/census.hpp"
#include "nacnet/features.hpp"
#include "nacnet/gnn.hpp"
#include "nacnet/graph_builder.hpp"
#include "nacnet/rng.hpp"
#include "nacnet/sna.hpp"
#include "nacnet/synth.hpp"

namespace {

using namespace nacnet;

HistologyMap benchMap(int rows, int cols) {
    return synthesizeMap(makeBenchmarkSpec(Response::Pcr, rows, cols), 42);
}

TmeGraph benchGraph(int rows, int cols) {
    return buildGraph(benchMap(rows, cols), BuilderConfig{}, 1);
}

void BM_BuildGraph(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const HistologyMap map = benchMap(side, side);
    const BuilderConfig cfg;
    for (auto _ : state) {
        TmeGraph g = buildGraph(map, cfg, 1);
        benchmark::DoNotOptimize(g);
    }
    state.SetComplexityN(side);
}
BENCHMARK(BM_BuildGraph)->Arg(20)->Arg(40)->Arg(80)->Complexity();

void BM_Betweenness(benchmark::State& state) {
    const TmeGraph g = benchGraph(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(0)));
    for (auto _ : state) {
        std::vector<double> b = betweennessCentrality(g, 1);
        benchmark::DoNotOptimize(b);
    }
    state.counters["nodes"] = g.numNodes();
}
BENCHMARK(BM_Betweenness)->Arg(20)->Arg(40);

void BM_Closeness(benchmark::State& state) {
    const TmeGraph g = benchGraph(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(0)));
    for (auto _ : state) {
        std::vector<double> c = closenessCentrality(g, 1);
        benchmark::DoNotOptimize(c);
    }
    state.counters["nodes"] = g.numNodes();
}
BENCHMARK(BM_Closeness)->Arg(20)->Arg(40);

void BM_PageRank(benchmark::State& state) {
    const TmeGraph g = benchGraph(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(0)));
    for (auto _ : state) {
        PageRankResult r = pageRank(g);
        benchmark::DoNotOptimize(r);
    }
    state.counters["nodes"] = g.numNodes();
}
BENCHMARK(BM_PageRank)->Arg(20)->Arg(40);

void BM_Census(benchmark::State& state) {
    const TmeGraph g = benchGraph(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(0)));
    for (auto _ : state) {
        CensusTable t = computeCensus(g);
        benchmark::DoNotOptimize(t);
    }
    state.counters["edges"] = g.numEdges();
}
BENCHMARK(BM_Census)->Arg(20)->Arg(40)->Arg(80);

void BM_ModelForward(benchmark::State& state) {
    const TmeGraph g = benchGraph(40, 40);
    Rng rng(7);
    std::vector<int> labels;
    for (const TmeNode& n : g.nodes) labels.push_back(n.label);
    const std::vector<std::vector<double>> tex = synthTextures(labels, 9, TextureSynthConfig{});
    TextureTable table;
    for (std::size_t i = 0; i < tex.size(); ++i) table.rows.emplace(g.nodes[i].id, tex[i]);
    const Matrix x = assembleFeatures(g, table, FeatureConfig{});

    ModelConfig cfg;
    cfg.hidden = static_cast<int>(state.range(0));
    const ModelParams params = initModel(cfg, rng);
    for (auto _ : state) {
        ForwardCache cache = forward(params, g, x, false, nullptr);
        benchmark::DoNotOptimize(cache.probs);
    }
    state.counters["nodes"] = g.numNodes();
}
BENCHMARK(BM_ModelForward)->Arg(32)->Arg(64)->Arg(128);

} // namespace

BENCHMARK_MAIN();
