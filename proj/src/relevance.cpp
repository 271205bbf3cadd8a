// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/relevance.hpp"

#include <cmath>

#include "relex/error.hpp"
#include "relex/text.hpp"

namespace relex {

namespace {

std::vector<std::string> sections(const UserContext& u) {
    std::vector<std::string> out;
    std::vector<std::string> history;
    for (const auto& h : u.search_history)
        if (!h.empty()) history.push_back(h);
    std::vector<std::string> interests;
    for (const auto& i : u.interests)
        if (!i.empty()) interests.push_back(i);
    if (!history.empty()) out.push_back(join(history, "; "));
    if (!u.expertise.empty()) out.push_back(u.expertise);
    if (!interests.empty()) out.push_back(join(interests, "; "));
    return out;
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
}

}  // namespace

bool UserContext::empty() const { return sections(*this).empty(); }

std::string relationship_text(const ConnectionInstance& conn, const KnowledgeGraph& kg) {
    std::vector<std::string> parts{kg.label(conn.entity1), conn.explanation_text, kg.label(conn.entity2),
                                   conn.relationship_type};
    for (const auto& [_, value] : conn.metadata) parts.push_back(value);
    std::vector<std::string> kept;
    for (auto& p : parts)
        if (!p.empty()) kept.push_back(std::move(p));
    return join(kept, " ");
}

std::string user_context_text(const UserContext& u) { return join(sections(u), "\n"); }

std::string user_context_description(const UserContext& u) {
    auto s = sections(u);
    return s.empty() ? std::string("unspecified") : join(s, "; ");
}

double contextual_relevance(const ConnectionInstance& conn, const UserContext& u,
                            const EmbeddingBackend& backend, const KnowledgeGraph& kg) {
    return cosine(backend.embed(relationship_text(conn, kg)), backend.embed(user_context_text(u)));
}

InterestingnessBreakdown interestingness(double sr, double cr, double alpha) {
    if (!(sr >= 0.0 && sr < 1.0)) throw DomainError("semantic relatedness must lie in [0, 1)");
    if (!(cr >= -1.0 && cr <= 1.0)) throw DomainError("contextual relevance must lie in [-1, 1]");
    check_alpha(alpha);
    return {sr, cr, alpha, alpha * sr + (1.0 - alpha) * cr};
}

double resolve_alpha(std::optional<double> request, const UserContext& u, std::optional<double> configured) {
    double alpha = kDefaultAlpha;
    if (request) alpha = *request;
    else if (u.alpha_override) alpha = *u.alpha_override;
    else if (configured) alpha = *configured;
    check_alpha(alpha);
    return alpha;
}

}  // namespace relex
