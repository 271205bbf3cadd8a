// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

// Compares the OpenMP candidate-scoring kernel against its serial
// reference, on the shipped fixture and on synthetic graphs of growing size.

#include <map>
#include <memory>
#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "relex/explainer.hpp"

namespace relex {
namespace {

using Kernel = std::vector<ScoredCandidate> (*)(const EntityGraph&, std::span<const ConnectionInstance>,
                                                const UserContext&, const EmbeddingBackend&, const PathLimits&,
                                                double);

struct Workload {
    KnowledgeGraph kg;
    std::vector<ConnectionInstance> candidates;
    EntityGraph graph;
    HashingEmbedder embedder;
    UserContext context;

    Workload(KnowledgeGraph g, std::vector<ConnectionInstance> c)
        : kg(std::move(g)), candidates(std::move(c)), graph(kg, false) {
        context.interests = {"Dutch Golden Age painting"};
    }
    // graph refers to kg, so a Workload must stay where it was built.
    Workload(const Workload&) = delete;
    Workload& operator=(const Workload&) = delete;
};

const Workload& fixture_workload() {
    static const Workload w = [] {
        auto kg = load_ntriples_file(std::string(RELEX_FIXTURE_DIR) + "/graph.nt");
        auto c = discover_connections(kg, load_query_set_file(std::string(RELEX_FIXTURE_DIR) + "/queries.rq"));
        return Workload(std::move(kg), std::move(c));
    }();
    return w;
}

Iri synthetic(int i) { return Iri("http://bench.relex/n" + std::to_string(i)); }

// Sparse random graph with `nodes` entities and 3 edges per entity; the
// candidates are random entity pairs.
std::unique_ptr<Workload> synthetic_workload(int nodes, int pairs) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(nodes));
    std::uniform_int_distribution<int> pick(0, nodes - 1), pd(0, 4);
    std::vector<Triple> triples;
    for (int i = 0; i < nodes * 3; ++i)
        triples.push_back({synthetic(pick(rng)), Iri("http://bench.relex/p" + std::to_string(pd(rng))),
                           Term{synthetic(pick(rng))}});
    for (int i = 0; i < nodes; ++i)
        triples.push_back({synthetic(i), Iri("http://www.w3.org/2000/01/rdf-schema#label"),
                           Term{Literal("entity " + std::to_string(i), "en")}});
    std::vector<ConnectionInstance> candidates;
    while (static_cast<int>(candidates.size()) < pairs) {
        int a = pick(rng), b = pick(rng);
        if (a == b) continue;
        candidates.push_back({synthetic(a), synthetic(b), "linked to", {}, {}});
    }
    return std::make_unique<Workload>(KnowledgeGraph(triples), std::move(candidates));
}

void run(benchmark::State& state, const Workload& w, Kernel kernel) {
    PathLimits limits;
    for (auto _ : state) {
        auto scored = kernel(w.graph, w.candidates, w.context, w.embedder, limits, 0.3);
        benchmark::DoNotOptimize(scored.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.candidates.size()));
}

void BM_FixtureParallel(benchmark::State& s) { run(s, fixture_workload(), &score_candidates); }
void BM_FixtureSerial(benchmark::State& s) { run(s, fixture_workload(), &score_candidates_serial); }

const Workload& synthetic_cached(std::int64_t nodes) {
    static std::map<std::int64_t, std::unique_ptr<Workload>> cache;
    auto& slot = cache[nodes];
    if (!slot) slot = synthetic_workload(static_cast<int>(nodes), 64);
    return *slot;
}

void BM_SyntheticParallel(benchmark::State& s) { run(s, synthetic_cached(s.range(0)), &score_candidates); }
void BM_SyntheticSerial(benchmark::State& s) { run(s, synthetic_cached(s.range(0)), &score_candidates_serial); }

BENCHMARK(BM_FixtureParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FixtureSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SyntheticParallel)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SyntheticSerial)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace relex

BENCHMARK_MAIN();
