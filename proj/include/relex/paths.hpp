// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "relex/kg.hpp"

namespace relex {

struct PathEdge {
    Iri predicate;
    Direction direction;
    friend bool operator==(const PathEdge&, const PathEdge&) = default;
};

// Simple path: no node repeats, edges.size() == nodes.size() - 1 >= 1.
struct Path {
    std::vector<Iri> nodes;
    std::vector<PathEdge> edges;

    std::size_t length() const noexcept { return edges.size(); }
    friend bool operator==(const Path&, const Path&) = default;
};

struct PathSet {
    std::vector<Path> paths;
    bool truncated = false;
};

struct PathLimits {
    std::size_t max_depth = 4;
    std::size_t max_paths = 1000;
    // Undirected by default: an edge may be walked against its direction.
    bool directed = false;

    void validate() const;
};

// Entity-only adjacency (CSR) over a graph snapshot. Literal objects and
// self-loops are dropped. Arcs of a node are ordered by (neighbour,
// predicate, direction), all in canonical order.
class EntityGraph {
public:
    struct Arc {
        TermId to;
        TermId predicate;
        Direction direction;
    };

    EntityGraph(const KnowledgeGraph& kg, bool directed);

    const KnowledgeGraph& graph() const noexcept { return *kg_; }
    bool directed() const noexcept { return directed_; }
    std::size_t node_count() const noexcept { return offsets_.size() - 1; }

    std::span<const Arc> arcs(TermId node) const {
        return {arcs_.data() + offsets_[node], arcs_.data() + offsets_[node + 1]};
    }
    // Arcs walked backwards; same as arcs() when undirected.
    std::span<const Arc> reverse_arcs(TermId node) const {
        if (!directed_) return arcs(node);
        return {rarcs_.data() + roffsets_[node], rarcs_.data() + roffsets_[node + 1]};
    }

    std::vector<TermId> predicates() const;

private:
    const KnowledgeGraph* kg_;
    bool directed_;
    std::vector<std::size_t> offsets_;
    std::vector<Arc> arcs_;
    std::vector<std::size_t> roffsets_;
    std::vector<Arc> rarcs_;
};

// Path length histogram produced by the counting kernel: counts[d] is the
// number of enumerated simple paths with d edges.
struct PathCounts {
    std::vector<std::size_t> counts;
    bool truncated = false;

    std::size_t total() const;
};

// All simple paths e1 -> e2 within limits, shortest first and depth-first in
// canonical neighbour order within each length. When more than max_paths
// exist, the first max_paths in that order are kept and `truncated` is set.
PathSet enumerate_simple_paths(const EntityGraph& g, const Iri& e1, const Iri& e2,
                               const PathLimits& limits);
PathSet enumerate_simple_paths(const KnowledgeGraph& kg, const Iri& e1, const Iri& e2,
                               const PathLimits& limits = {});

// Same enumeration, counting only.
PathCounts count_simple_paths(const EntityGraph& g, TermId e1, TermId e2, const PathLimits& limits);

// SR = (1 / (|P| + 1)) * sum_i 1 / dist(p_i).
double relatedness_from_counts(const PathCounts& counts);

double semantic_relatedness(const EntityGraph& g, const Iri& e1, const Iri& e2,
                            const PathLimits& limits);
double semantic_relatedness(const KnowledgeGraph& kg, const Iri& e1, const Iri& e2,
                            const PathLimits& limits = {});

// Minimum edge count path; ties go to the canonically first neighbour.
std::optional<Path> shortest_path_bfs(const EntityGraph& g, const Iri& e1, const Iri& e2);
std::optional<Path> shortest_path_bfs(const KnowledgeGraph& kg, const Iri& e1, const Iri& e2,
                                      bool directed = false);

using PredicateWeight = std::function<double(const Iri& predicate)>;

// Minimum total weight path. Every predicate of the graph must weigh > 0.
std::optional<Path> shortest_path_dijkstra(const EntityGraph& g, const Iri& e1, const Iri& e2,
                                           const PredicateWeight& weight);
std::optional<Path> shortest_path_dijkstra(const KnowledgeGraph& kg, const Iri& e1, const Iri& e2,
                                           const PredicateWeight& weight, bool directed = false);

}  // namespace relex
