// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relex/dsl.hpp"
#include "relex/embedding.hpp"
#include "relex/kg.hpp"

namespace relex {

inline constexpr double kDefaultAlpha = 0.5;

struct UserContext {
    std::vector<std::string> search_history;
    std::string expertise;
    std::vector<std::string> interests;
    std::optional<double> alpha_override;

    bool empty() const;
};

// sr in [0, 1), cr in [-1, 1], alpha in [0, 1], score = alpha*sr + (1-alpha)*cr.
struct InterestingnessBreakdown {
    double sr = 0.0;
    double cr = 0.0;
    double alpha = kDefaultAlpha;
    double score = 0.0;
};

// Entity 1 label, seed label, entity 2 label, relationship type and metadata
// values (in key order), space separated; empty parts skipped.
std::string relationship_text(const ConnectionInstance& conn, const KnowledgeGraph& kg);

// History, expertise, interests: one line per non-empty section, list items
// joined with "; ".
std::string user_context_text(const UserContext& u);

// Single-line rendering used inside prompts; "unspecified" when empty.
std::string user_context_description(const UserContext& u);

double contextual_relevance(const ConnectionInstance& conn, const UserContext& u,
                            const EmbeddingBackend& backend, const KnowledgeGraph& kg);

// Throws DomainError when any input is outside its range.
InterestingnessBreakdown interestingness(double sr, double cr, double alpha);

// Request value, then the context override, then the configured default,
// then kDefaultAlpha. Throws DomainError if the chosen value is outside [0, 1].
double resolve_alpha(std::optional<double> request, const UserContext& u,
                     std::optional<double> configured = std::nullopt);

}  // namespace relex
