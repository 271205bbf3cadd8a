// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "relex/error.hpp"
#include "relex/paths.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace relex {
namespace {

using test::node;
using test::pred;

KnowledgeGraph graph_of(const std::vector<std::pair<int, int>>& edges) {
    std::vector<Triple> t;
    for (auto [a, b] : edges) t.push_back({node(a), pred(0), Term{node(b)}});
    return KnowledgeGraph(t);
}

test::OraclePath as_oracle(const Path& p) {
    test::OraclePath o;
    for (const auto& n : p.nodes) o.nodes.push_back(n.value());
    for (const auto& e : p.edges) o.edges.emplace_back(e.predicate.value(), e.direction == Direction::Out);
    return o;
}

TEST(Relatedness, SpotChecks) {
    // One edge: a single length-1 path.
    EXPECT_NEAR(semantic_relatedness(graph_of({{0, 1}}), node(0), node(1)), 0.5, 1e-12);
    // Disconnected, and an entity missing from the graph.
    auto split = graph_of({{0, 1}, {2, 3}});
    EXPECT_EQ(semantic_relatedness(split, node(0), node(3)), 0.0);
    EXPECT_EQ(semantic_relatedness(split, node(0), node(99)), 0.0);
    // 0-1-4 and 0-2-3-4: lengths 2 and 3.
    auto two = graph_of({{0, 1}, {1, 4}, {0, 2}, {2, 3}, {3, 4}});
    EXPECT_NEAR(semantic_relatedness(two, node(0), node(4)), 5.0 / 18.0, 1e-12);
    // Triangle: direct edge plus the two-hop detour.
    auto tri = graph_of({{0, 1}, {1, 2}, {0, 2}});
    EXPECT_NEAR(semantic_relatedness(tri, node(0), node(2)), (1.0 + 0.5) / 3.0, 1e-12);
}

TEST(Relatedness, SameEntityIsRejected) {
    auto g = graph_of({{0, 1}});
    EXPECT_THROW(semantic_relatedness(g, node(0), node(0)), DomainError);
    EXPECT_THROW(enumerate_simple_paths(g, node(0), node(0)), DomainError);
}

TEST(Relatedness, InvalidLimits) {
    auto g = graph_of({{0, 1}});
    PathLimits l;
    l.max_depth = 0;
    EXPECT_THROW(semantic_relatedness(g, node(0), node(1), l), DomainError);
    l = {};
    l.max_paths = 0;
    EXPECT_THROW(semantic_relatedness(g, node(0), node(1), l), DomainError);
}

TEST(Relatedness, ParallelTriplesAreDistinctEdges) {
    std::vector<Triple> t{{node(0), pred(0), Term{node(1)}},
                          {node(0), pred(1), Term{node(1)}},
                          {node(1), pred(0), Term{node(0)}},
                          {node(0), pred(0), Term{node(0)}},
                          {node(0), pred(0), Term{Literal("x")}}};
    KnowledgeGraph kg(t);
    auto ps = enumerate_simple_paths(kg, node(0), node(1));
    EXPECT_EQ(ps.paths.size(), 3u);
    EXPECT_NEAR(semantic_relatedness(kg, node(0), node(1)), 3.0 / 4.0, 1e-12);
    PathLimits directed;
    directed.directed = true;
    EXPECT_NEAR(semantic_relatedness(kg, node(0), node(1), directed), 2.0 / 3.0, 1e-12);
}

TEST(Relatedness, MatchesBruteForceOnRandomGraphs) {
    std::mt19937_64 rng(2026);
    for (int round = 0; round < 60; ++round) {
        int n = 3 + round % 10;
        auto raw = test::random_triples(rng, n, 6 + round % 25, 2, 3);
        KnowledgeGraph kg(raw);
        for (bool directed : {false, true}) {
            PathLimits limits;
            limits.directed = directed;
            limits.max_depth = 1 + round % 5;
            limits.max_paths = 1u << 30;
            EntityGraph g(kg, directed);
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    if (a == b) continue;
                    auto want = test::brute_force_paths(kg.triples(), node(a), node(b), limits.max_depth, directed);
                    EXPECT_NEAR(semantic_relatedness(g, node(a), node(b), limits), test::oracle_relatedness(want),
                                1e-9);

                    auto got = enumerate_simple_paths(g, node(a), node(b), limits);
                    EXPECT_FALSE(got.truncated);
                    std::vector<test::OraclePath> mine;
                    for (const auto& p : got.paths) {
                        ASSERT_EQ(p.nodes.size(), p.edges.size() + 1);
                        EXPECT_EQ(p.nodes.front(), node(a));
                        EXPECT_EQ(p.nodes.back(), node(b));
                        mine.push_back(as_oracle(p));
                    }
                    EXPECT_TRUE(std::is_sorted(got.paths.begin(), got.paths.end(),
                                               [](const Path& x, const Path& y) { return x.length() < y.length(); }));
                    std::sort(mine.begin(), mine.end());
                    std::sort(want.begin(), want.end());
                    EXPECT_EQ(mine, want);
                }
            }
        }
    }
}

TEST(Relatedness, SymmetricWhenUndirected) {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 20; ++round) {
        KnowledgeGraph kg(test::random_triples(rng, 8, 18, 2));
        EntityGraph g(kg, false);
        for (int a = 0; a < 8; ++a)
            for (int b = a + 1; b < 8; ++b)
                EXPECT_DOUBLE_EQ(semantic_relatedness(g, node(a), node(b), {}),
                                 semantic_relatedness(g, node(b), node(a), {}));
    }
}

TEST(Enumerate, TruncationKeepsShortestFirstPrefix) {
    // Complete graph on 6 nodes has many paths between any pair.
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b) edges.push_back({a, b});
    auto kg = graph_of(edges);
    PathLimits all;
    all.max_depth = 5;
    auto full = enumerate_simple_paths(kg, node(0), node(5), all);
    EXPECT_FALSE(full.truncated);
    // 1 + 4 + 12 + 24 + 24 simple paths of length 1..5.
    EXPECT_EQ(full.paths.size(), 65u);

    PathLimits few = all;
    few.max_paths = 10;
    auto cut = enumerate_simple_paths(kg, node(0), node(5), few);
    EXPECT_TRUE(cut.truncated);
    ASSERT_EQ(cut.paths.size(), 10u);
    EXPECT_TRUE(std::equal(cut.paths.begin(), cut.paths.end(), full.paths.begin()));

    few.max_paths = 65;
    EXPECT_FALSE(enumerate_simple_paths(kg, node(0), node(5), few).truncated);

    EntityGraph g(kg, false);
    few.max_paths = 10;
    auto counts = count_simple_paths(g, *kg.id_of(node(0)), *kg.id_of(node(5)), few);
    EXPECT_TRUE(counts.truncated);
    EXPECT_EQ(counts.total(), 10u);
    EXPECT_NEAR(relatedness_from_counts(counts), (1.0 + 4 * 0.5 + 5.0 / 3.0) / 11.0, 1e-12);
}

TEST(Enumerate, DirectedFollowsArrows) {
    auto kg = graph_of({{0, 1}, {1, 2}});
    PathLimits d;
    d.directed = true;
    EXPECT_EQ(enumerate_simple_paths(kg, node(0), node(2), d).paths.size(), 1u);
    EXPECT_TRUE(enumerate_simple_paths(kg, node(2), node(0), d).paths.empty());
    auto back = enumerate_simple_paths(kg, node(2), node(0));
    ASSERT_EQ(back.paths.size(), 1u);
    EXPECT_EQ(back.paths[0].edges[0].direction, Direction::In);
}

TEST(ShortestPath, BfsAgainstBruteForce) {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 40; ++round) {
        KnowledgeGraph kg(test::random_triples(rng, 9, 14, 3));
        for (bool directed : {false, true}) {
            EntityGraph g(kg, directed);
            for (int a = 0; a < 9; ++a) {
                for (int b = 0; b < 9; ++b) {
                    if (a == b) continue;
                    auto all = test::brute_force_paths(kg.triples(), node(a), node(b), 8, directed);
                    auto p = shortest_path_bfs(g, node(a), node(b));
                    if (all.empty()) {
                        EXPECT_FALSE(p);
                        continue;
                    }
                    ASSERT_TRUE(p);
                    std::size_t best = all.front().edges.size();
                    for (const auto& o : all) best = std::min(best, o.edges.size());
                    EXPECT_EQ(p->length(), best);
                    EXPECT_NE(std::find(all.begin(), all.end(), as_oracle(*p)), all.end());
                }
            }
        }
    }
}

TEST(ShortestPath, DijkstraAgainstBruteForce) {
    std::mt19937_64 rng(123);
    for (int round = 0; round < 40; ++round) {
        KnowledgeGraph kg(test::random_triples(rng, 8, 14, 3));
        std::map<std::string, double> w{{pred(0).value(), 1.0}, {pred(1).value(), 2.5}, {pred(2).value(), 0.25}};
        auto weight = [&](const Iri& p) { return w.at(p.value()); };
        EntityGraph g(kg, false);
        for (int a = 0; a < 8; ++a) {
            for (int b = 0; b < 8; ++b) {
                if (a == b) continue;
                auto all = test::brute_force_paths(kg.triples(), node(a), node(b), 7, false);
                auto p = shortest_path_dijkstra(g, node(a), node(b), weight);
                ASSERT_EQ(all.empty(), !p);
                if (!p) continue;
                auto cost = [&](const test::OraclePath& o) {
                    double c = 0;
                    for (const auto& e : o.edges) c += w.at(e.first);
                    return c;
                };
                double best = 1e300;
                for (const auto& o : all) best = std::min(best, cost(o));
                EXPECT_NEAR(cost(as_oracle(*p)), best, 1e-12);
            }
        }
    }
}

TEST(ShortestPath, RejectsNonPositiveWeights) {
    auto kg = graph_of({{0, 1}});
    EXPECT_THROW(shortest_path_dijkstra(kg, node(0), node(1), [](const Iri&) { return 0.0; }), DomainError);
    EXPECT_FALSE(shortest_path_bfs(kg, node(0), node(7)));
}

}  // namespace
}  // namespace relex
