// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/paths.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <set>
#include <tuple>

#include "relex/error.hpp"

namespace relex {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

void sort_arcs(std::vector<EntityGraph::Arc>& arcs, std::vector<std::size_t>& offsets,
               std::vector<std::pair<TermId, EntityGraph::Arc>> items, std::size_t n) {
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        return std::tuple(a.first, a.second.to, a.second.predicate, a.second.direction) <
               std::tuple(b.first, b.second.to, b.second.predicate, b.second.direction);
    });
    offsets.assign(n + 1, 0);
    for (const auto& [from, _] : items) ++offsets[from + 1];
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    arcs.clear();
    arcs.reserve(items.size());
    for (const auto& it : items) arcs.push_back(it.second);
}

// Hop distance from every node to `target`, walking arcs backwards, capped at
// `cap` (nodes further away stay kUnreached).
std::vector<std::size_t> distances_to(const EntityGraph& g, TermId target, std::size_t cap) {
    std::vector<std::size_t> dist(g.node_count(), kUnreached);
    std::deque<TermId> queue{target};
    dist[target] = 0;
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        if (dist[v] == cap) continue;
        for (const auto& a : g.reverse_arcs(v)) {
            if (dist[a.to] == kUnreached) {
                dist[a.to] = dist[v] + 1;
                queue.push_back(a.to);
            }
        }
    }
    return dist;
}

// Depth-first enumeration of simple paths of one exact length. `visit` gets
// the arc stack and returns false to stop.
class ExactLengthWalker {
public:
    ExactLengthWalker(const EntityGraph& g, TermId target, const std::vector<std::size_t>& dist)
        : g_(g), target_(target), dist_(dist), on_path_(g.node_count(), false) {}

    template <typename Visit>
    bool walk(TermId source, std::size_t length, Visit&& visit) {
        stack_.clear();
        on_path_[source] = true;
        bool cont = step(source, length, visit);
        on_path_[source] = false;
        return cont;
    }

    const std::vector<std::pair<TermId, EntityGraph::Arc>>& stack() const { return stack_; }

private:
    template <typename Visit>
    bool step(TermId v, std::size_t remaining, Visit& visit) {
        if (remaining == 0) return v == target_ ? visit(stack_) : true;
        if (v == target_) return true;
        for (const auto& a : g_.arcs(v)) {
            if (on_path_[a.to] || dist_[a.to] == kUnreached || dist_[a.to] > remaining - 1) continue;
            on_path_[a.to] = true;
            stack_.emplace_back(v, a);
            bool cont = step(a.to, remaining - 1, visit);
            stack_.pop_back();
            on_path_[a.to] = false;
            if (!cont) return false;
        }
        return true;
    }

    const EntityGraph& g_;
    TermId target_;
    const std::vector<std::size_t>& dist_;
    std::vector<bool> on_path_;
    std::vector<std::pair<TermId, EntityGraph::Arc>> stack_;
};

template <typename OnPath>
bool for_each_path(const EntityGraph& g, TermId src, TermId dst, const PathLimits& limits,
                   OnPath&& on_path) {
    auto dist = distances_to(g, dst, limits.max_depth);
    if (dist[src] == kUnreached) return false;
    ExactLengthWalker walker(g, dst, dist);
    std::size_t found = 0;
    bool truncated = false;
    for (std::size_t len = std::max<std::size_t>(dist[src], 1); len <= limits.max_depth; ++len) {
        bool cont = walker.walk(src, len, [&](const auto& stack) {
            if (found == limits.max_paths) {
                truncated = true;
                return false;
            }
            ++found;
            on_path(stack);
            return true;
        });
        if (!cont) break;
    }
    return truncated;
}

Path to_path(const KnowledgeGraph& kg, TermId src,
             const std::vector<std::pair<TermId, EntityGraph::Arc>>& stack) {
    Path p;
    p.nodes.push_back(std::get<Iri>(kg.term(src)));
    for (const auto& [from, arc] : stack) {
        p.edges.push_back({std::get<Iri>(kg.term(arc.predicate)), arc.direction});
        p.nodes.push_back(std::get<Iri>(kg.term(arc.to)));
    }
    return p;
}

std::optional<TermId> entity_id(const KnowledgeGraph& kg, const Iri& e) { return kg.id_of(e); }

void require_distinct(const Iri& e1, const Iri& e2) {
    if (e1 == e2)
        throw DomainError("path endpoints must differ (relatedness of an entity with itself is undefined)");
}

}  // namespace

void PathLimits::validate() const {
    if (max_depth < 1) throw DomainError("max_depth must be >= 1");
    if (max_paths < 1) throw DomainError("max_paths must be >= 1");
}

EntityGraph::EntityGraph(const KnowledgeGraph& kg, bool directed) : kg_(&kg), directed_(directed) {
    const std::size_t n = kg.term_count();
    std::vector<std::pair<TermId, Arc>> fwd;
    std::vector<std::pair<TermId, Arc>> rev;
    for (const auto& t : kg.spo()) {
        if (t.s == t.o || !kg.is_iri_id(t.o)) continue;
        fwd.push_back({t.s, Arc{t.o, t.p, Direction::Out}});
        if (directed)
            rev.push_back({t.o, Arc{t.s, t.p, Direction::In}});
        else
            fwd.push_back({t.o, Arc{t.s, t.p, Direction::In}});
    }
    sort_arcs(arcs_, offsets_, std::move(fwd), n);
    if (directed) sort_arcs(rarcs_, roffsets_, std::move(rev), n);
}

std::vector<TermId> EntityGraph::predicates() const {
    std::set<TermId> preds;
    for (const auto& a : arcs_) preds.insert(a.predicate);
    return {preds.begin(), preds.end()};
}

std::size_t PathCounts::total() const {
    std::size_t n = 0;
    for (auto c : counts) n += c;
    return n;
}

PathSet enumerate_simple_paths(const EntityGraph& g, const Iri& e1, const Iri& e2,
                               const PathLimits& limits) {
    limits.validate();
    require_distinct(e1, e2);
    PathSet out;
    auto src = entity_id(g.graph(), e1);
    auto dst = entity_id(g.graph(), e2);
    if (!src || !dst) return out;
    out.truncated = for_each_path(g, *src, *dst, limits, [&](const auto& stack) {
        out.paths.push_back(to_path(g.graph(), *src, stack));
    });
    return out;
}

PathSet enumerate_simple_paths(const KnowledgeGraph& kg, const Iri& e1, const Iri& e2,
                               const PathLimits& limits) {
    EntityGraph g(kg, limits.directed);
    return enumerate_simple_paths(g, e1, e2, limits);
}

PathCounts count_simple_paths(const EntityGraph& g, TermId e1, TermId e2, const PathLimits& limits) {
    limits.validate();
    if (e1 == e2) throw DomainError("path endpoints must differ");
    PathCounts out;
    out.counts.assign(limits.max_depth + 1, 0);
    out.truncated = for_each_path(g, e1, e2, limits, [&](const auto& stack) { ++out.counts[stack.size()]; });
    return out;
}

double relatedness_from_counts(const PathCounts& counts) {
    double sum = 0.0;
    std::size_t total = 0;
    for (std::size_t d = 1; d < counts.counts.size(); ++d) {
        sum += static_cast<double>(counts.counts[d]) / static_cast<double>(d);
        total += counts.counts[d];
    }
    return sum / static_cast<double>(total + 1);
}

double semantic_relatedness(const EntityGraph& g, const Iri& e1, const Iri& e2,
                            const PathLimits& limits) {
    limits.validate();
    require_distinct(e1, e2);
    auto src = entity_id(g.graph(), e1);
    auto dst = entity_id(g.graph(), e2);
    if (!src || !dst) return 0.0;
    return relatedness_from_counts(count_simple_paths(g, *src, *dst, limits));
}

double semantic_relatedness(const KnowledgeGraph& kg, const Iri& e1, const Iri& e2,
                            const PathLimits& limits) {
    EntityGraph g(kg, limits.directed);
    return semantic_relatedness(g, e1, e2, limits);
}

namespace {

std::optional<Path> rebuild(const EntityGraph& g, TermId src, TermId dst,
                            const std::vector<std::optional<std::pair<TermId, EntityGraph::Arc>>>& parent) {
    if (src != dst && !parent[dst]) return std::nullopt;
    std::vector<std::pair<TermId, EntityGraph::Arc>> stack;
    for (TermId v = dst; v != src; v = parent[v]->first) stack.push_back(*parent[v]);
    std::reverse(stack.begin(), stack.end());
    return to_path(g.graph(), src, stack);
}

}  // namespace

std::optional<Path> shortest_path_bfs(const EntityGraph& g, const Iri& e1, const Iri& e2) {
    auto src = entity_id(g.graph(), e1);
    auto dst = entity_id(g.graph(), e2);
    if (!src || !dst || *src == *dst) return std::nullopt;
    std::vector<std::optional<std::pair<TermId, EntityGraph::Arc>>> parent(g.node_count());
    std::vector<bool> seen(g.node_count(), false);
    std::deque<TermId> queue{*src};
    seen[*src] = true;
    while (!queue.empty() && !seen[*dst]) {
        auto v = queue.front();
        queue.pop_front();
        for (const auto& a : g.arcs(v)) {
            if (seen[a.to]) continue;
            seen[a.to] = true;
            parent[a.to] = {v, a};
            queue.push_back(a.to);
        }
    }
    return rebuild(g, *src, *dst, parent);
}

std::optional<Path> shortest_path_bfs(const KnowledgeGraph& kg, const Iri& e1, const Iri& e2,
                                      bool directed) {
    EntityGraph g(kg, directed);
    return shortest_path_bfs(g, e1, e2);
}

std::optional<Path> shortest_path_dijkstra(const EntityGraph& g, const Iri& e1, const Iri& e2,
                                           const PredicateWeight& weight) {
    const auto& kg = g.graph();
    std::vector<double> w(kg.term_count(), 0.0);
    for (auto p : g.predicates()) {
        double x = weight(std::get<Iri>(kg.term(p)));
        if (!(x > 0.0) || !std::isfinite(x))
            throw DomainError("predicate weight must be positive and finite: " + kg.canonical_text(p));
        w[p] = x;
    }
    auto src = entity_id(kg, e1);
    auto dst = entity_id(kg, e2);
    if (!src || !dst || *src == *dst) return std::nullopt;

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.node_count(), inf);
    std::vector<bool> settled(g.node_count(), false);
    std::vector<std::optional<std::pair<TermId, EntityGraph::Arc>>> parent(g.node_count());
    // (distance, insertion sequence, node): the sequence makes ties follow
    // canonical arc order.
    using Entry = std::tuple<double, std::size_t, TermId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    std::size_t seq = 0;
    dist[*src] = 0.0;
    pq.emplace(0.0, seq++, *src);
    while (!pq.empty()) {
        auto [d, _, v] = pq.top();
        pq.pop();
        if (settled[v]) continue;
        settled[v] = true;
        if (v == *dst) break;
        for (const auto& a : g.arcs(v)) {
            double nd = d + w[a.predicate];
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                parent[a.to] = {v, a};
                pq.emplace(nd, seq++, a.to);
            }
        }
    }
    return rebuild(g, *src, *dst, parent);
}

std::optional<Path> shortest_path_dijkstra(const KnowledgeGraph& kg, const Iri& e1, const Iri& e2,
                                           const PredicateWeight& weight, bool directed) {
    EntityGraph g(kg, directed);
    return shortest_path_dijkstra(g, e1, e2, weight);
}

}  // namespace relex
