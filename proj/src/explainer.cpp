// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/explainer.hpp"

#include <algorithm>
#include <tuple>

#include "relex/error.hpp"

namespace relex {

namespace {

ScoredCandidate score_one(const EntityGraph& graph, const ConnectionInstance& conn,
                          const Embedding& context_vec, const EmbeddingBackend& embedder,
                          const PathLimits& limits, double alpha) {
    ScoredCandidate out{conn, {}, std::nullopt};
    try {
        double sr = semantic_relatedness(graph, conn.entity1, conn.entity2, limits);
        double cr = cosine(embedder.embed(relationship_text(conn, graph.graph())), context_vec);
        out.breakdown = interestingness(sr, cr, alpha);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

struct Generated {
    std::optional<std::string> text;
    std::vector<std::string> warnings;
    std::string error;
};

Generated generate_one(const KnowledgeGraph& kg, const ScoredCandidate& c, const UserContext& context,
                       const GenerationBackend& generator) {
    Generated g;
    try {
        auto prompt = build_prompt(make_prompt_input(kg, c.connection, c.breakdown, context));
        auto text = generator.generate(prompt);
        if (text.empty()) throw BackendError(BackendError::Kind::EmptyCompletion, "empty explanation");
        for (const auto& e : {c.connection.entity1, c.connection.entity2}) {
            auto label = kg.label(e);
            if (text.find(label) != std::string::npos) continue;
            if (generator.deterministic())
                throw Error("explanation does not mention '" + label + "'");
            g.warnings.push_back("explanation does not mention '" + label + "'");
        }
        g.text = std::move(text);
    } catch (const std::exception& e) {
        g.error = e.what();
    }
    return g;
}

}  // namespace

std::vector<ScoredCandidate> score_candidates_serial(const EntityGraph& graph,
                                                     std::span<const ConnectionInstance> candidates,
                                                     const UserContext& context,
                                                     const EmbeddingBackend& embedder,
                                                     const PathLimits& limits, double alpha) {
    limits.validate();
    auto context_vec = embedder.embed(user_context_text(context));
    std::vector<ScoredCandidate> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) out.push_back(score_one(graph, c, context_vec, embedder, limits, alpha));
    return out;
}

std::vector<ScoredCandidate> score_candidates(const EntityGraph& graph,
                                              std::span<const ConnectionInstance> candidates,
                                              const UserContext& context, const EmbeddingBackend& embedder,
                                              const PathLimits& limits, double alpha) {
    limits.validate();
    auto context_vec = embedder.embed(user_context_text(context));
    std::vector<ScoredCandidate> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) out.push_back({c, {}, std::nullopt});
    const auto n = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = score_one(graph, candidates[i], context_vec, embedder, limits, alpha);
    return out;
}

bool ranks_before(const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.breakdown.score != b.breakdown.score) return a.breakdown.score > b.breakdown.score;
    return std::tie(a.connection.entity1, a.connection.entity2, a.connection.relationship_type) <
           std::tie(b.connection.entity1, b.connection.entity2, b.connection.relationship_type);
}

void sort_ranked(std::vector<ScoredCandidate>& scored) { std::sort(scored.begin(), scored.end(), ranks_before); }

PromptInput make_prompt_input(const KnowledgeGraph& kg, const ConnectionInstance& conn,
                              const InterestingnessBreakdown& breakdown, const UserContext& context) {
    return PromptInput{kg.describe(conn.entity1).description, kg.describe(conn.entity2).description,
                       conn.relationship_type, breakdown.score, user_context_description(context)};
}

RankedExplanations rank_and_explain(const EntityGraph& graph, std::span<const ConnectionInstance> candidates,
                                    const UserContext& context, std::size_t k, const Backends& backends,
                                    const PathLimits& limits, double alpha) {
    RankedExplanations out;
    if (k == 0 || candidates.empty()) return out;

    auto scored = score_candidates(graph, candidates, context, backends.embedder, limits, alpha);
    std::vector<ScoredCandidate> ok;
    ok.reserve(scored.size());
    for (auto& s : scored) {
        if (s.error) out.failures.push_back({s.connection, "scoring", *s.error});
        else ok.push_back(std::move(s));
    }
    sort_ranked(ok);
    if (ok.size() > k) ok.erase(ok.begin() + static_cast<std::ptrdiff_t>(k), ok.end());

    std::vector<Generated> generated(ok.size());
    const auto n = static_cast<std::ptrdiff_t>(ok.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        generated[i] = generate_one(graph.graph(), ok[i], context, backends.generator);

    for (std::size_t i = 0; i < ok.size(); ++i) {
        if (!generated[i].text) {
            out.failures.push_back({ok[i].connection, "generation", generated[i].error});
            continue;
        }
        out.items.push_back({std::move(ok[i].connection), ok[i].breakdown, std::move(*generated[i].text),
                             backends.generator.id(), std::move(generated[i].warnings)});
    }
    if (out.items.empty()) {
        const auto& first = out.failures.front();
        throw Error("every candidate failed; first failure (" + first.stage + "): " + first.message);
    }
    return out;
}

RankedExplanations rank_and_explain(const KnowledgeGraph& kg, std::span<const ConnectionInstance> candidates,
                                    const UserContext& context, std::size_t k, const Backends& backends,
                                    const PathLimits& limits, double alpha) {
    EntityGraph graph(kg, limits.directed);
    return rank_and_explain(graph, candidates, context, k, backends, limits, alpha);
}

}  // namespace relex
