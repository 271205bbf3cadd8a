// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relex/dsl.hpp"
#include "relex/embedding.hpp"
#include "relex/generation.hpp"
#include "relex/paths.hpp"
#include "relex/relevance.hpp"

namespace relex {

struct ScoredCandidate {
    ConnectionInstance connection;
    InterestingnessBreakdown breakdown;
    // Set when scoring failed (backend error); breakdown is meaningless then.
    std::optional<std::string> error;
};

// Scores every candidate: SR over `graph`, CR against the context embedding,
// then I(r). Output is index-aligned with `candidates`.
//
// score_candidates runs the per-candidate loop under OpenMP;
// score_candidates_serial is the reference it is tested and benchmarked
// against. Both give bit-identical results.
std::vector<ScoredCandidate> score_candidates(const EntityGraph& graph,
                                              std::span<const ConnectionInstance> candidates,
                                              const UserContext& context, const EmbeddingBackend& embedder,
                                              const PathLimits& limits, double alpha);
std::vector<ScoredCandidate> score_candidates_serial(const EntityGraph& graph,
                                                     std::span<const ConnectionInstance> candidates,
                                                     const UserContext& context,
                                                     const EmbeddingBackend& embedder,
                                                     const PathLimits& limits, double alpha);

// Score non-increasing, then entity1, entity2, relationship_type ascending.
bool ranks_before(const ScoredCandidate& a, const ScoredCandidate& b);
void sort_ranked(std::vector<ScoredCandidate>& scored);

PromptInput make_prompt_input(const KnowledgeGraph& kg, const ConnectionInstance& conn,
                              const InterestingnessBreakdown& breakdown, const UserContext& context);

struct ScoredExplanation {
    ConnectionInstance connection;
    InterestingnessBreakdown breakdown;
    std::string explanation;
    std::string backend_id;
    std::vector<std::string> warnings;
};

struct ItemFailure {
    ConnectionInstance connection;
    std::string stage;  // "scoring" or "generation"
    std::string message;
};

struct RankedExplanations {
    std::vector<ScoredExplanation> items;
    std::vector<ItemFailure> failures;
};

struct Backends {
    const EmbeddingBackend& embedder;
    const GenerationBackend& generator;
};

// Scores all candidates, keeps the top k and generates explanations for those
// only. Failed items are reported in `failures` and left out of `items`;
// throws Error when every attempted item failed.
RankedExplanations rank_and_explain(const EntityGraph& graph, std::span<const ConnectionInstance> candidates,
                                    const UserContext& context, std::size_t k, const Backends& backends,
                                    const PathLimits& limits, double alpha);

RankedExplanations rank_and_explain(const KnowledgeGraph& kg, std::span<const ConnectionInstance> candidates,
                                    const UserContext& context, std::size_t k, const Backends& backends,
                                    const PathLimits& limits = {}, double alpha = kDefaultAlpha);

}  // namespace relex
