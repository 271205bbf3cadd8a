// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relex/dsl.hpp"
#include "relex/paths.hpp"

namespace relex {

enum class BaselineMethod { Graph, Knowledge };

struct BaselineResult {
    ConnectionInstance connection;
    std::string explanation;
    BaselineMethod method;
    std::optional<Path> path;  // always set for the graph baseline
};

struct ExplanationTemplate {
    std::string relationship_type;
    std::string text;  // must contain {entity1} and {entity2}
};

using TemplateSet = std::map<std::string, ExplanationTemplate>;

// `TEMPLATE <relationship_type> "<text>"` lines; '#' comments.
TemplateSet parse_templates(std::string_view source);
TemplateSet load_templates_file(const std::string& path);

// `A --[p]--> B <--[q]-- C`, labels for nodes and local names for predicates.
std::string verbalize_path(const KnowledgeGraph& kg, const Path& path);

// Hop-count shortest path (unit-weight Dijkstra), verbalised; relationship
// type "path". Absent when the pair is disconnected.
std::optional<BaselineResult> graph_baseline(const EntityGraph& graph, const Iri& e1, const Iri& e2);
std::optional<BaselineResult> graph_baseline(const KnowledgeGraph& kg, const Iri& e1, const Iri& e2);

// Discovered connections with their type's template filled in, in discovery
// order. Throws Error when a discovered type has no template.
std::vector<BaselineResult> knowledge_baseline(const KnowledgeGraph& kg, std::span<const PatternQuery> queries,
                                               const TemplateSet& templates);

std::string fill_explanation_template(const KnowledgeGraph& kg, const ExplanationTemplate& tmpl,
                                      const ConnectionInstance& conn);

}  // namespace relex
