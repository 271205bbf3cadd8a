// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/baselines.hpp"

#include <fstream>
#include <sstream>

#include "relex/error.hpp"

namespace relex {

TemplateSet parse_templates(std::string_view source) {
    TemplateSet out;
    std::istringstream in{std::string(source)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line.substr(first));
        std::string keyword, type;
        ls >> keyword >> type;
        if (keyword != "TEMPLATE") throw ParseError("expected TEMPLATE", lineno, first + 1, keyword);
        if (type.empty()) throw ParseError("missing relationship type", lineno, 0);
        auto open = line.find('"');
        auto close = line.rfind('"');
        if (open == std::string::npos || close == open)
            throw ParseError("template text must be quoted", lineno, 0, type);
        std::string text = line.substr(open + 1, close - open - 1);
        if (text.find("{entity1}") == std::string::npos || text.find("{entity2}") == std::string::npos)
            throw ParseError("template must contain {entity1} and {entity2}", lineno, open + 1, text);
        if (!out.emplace(type, ExplanationTemplate{type, text}).second)
            throw ParseError("duplicate template", lineno, 0, type);
    }
    return out;
}

TemplateSet load_templates_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open template file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_templates(ss.str());
}

std::string verbalize_path(const KnowledgeGraph& kg, const Path& path) {
    std::string out = kg.label(path.nodes.front());
    for (std::size_t i = 0; i < path.edges.size(); ++i) {
        const auto& e = path.edges[i];
        auto pred = e.predicate.local_name();
        out += e.direction == Direction::Out ? " --[" + pred + "]--> " : " <--[" + pred + "]-- ";
        out += kg.label(path.nodes[i + 1]);
    }
    return out;
}

std::optional<BaselineResult> graph_baseline(const EntityGraph& graph, const Iri& e1, const Iri& e2) {
    if (e1 == e2) throw DomainError("graph baseline needs two distinct entities");
    auto path = shortest_path_dijkstra(graph, e1, e2, [](const Iri&) { return 1.0; });
    if (!path) return std::nullopt;
    auto text = verbalize_path(graph.graph(), *path);
    return BaselineResult{ConnectionInstance{e1, e2, "path", {}, text}, text, BaselineMethod::Graph,
                          std::move(path)};
}

std::optional<BaselineResult> graph_baseline(const KnowledgeGraph& kg, const Iri& e1, const Iri& e2) {
    EntityGraph graph(kg, false);
    return graph_baseline(graph, e1, e2);
}

std::string fill_explanation_template(const KnowledgeGraph& kg, const ExplanationTemplate& tmpl,
                                      const ConnectionInstance& conn) {
    std::map<std::string, std::string> values{{"entity1", kg.label(conn.entity1)},
                                              {"entity2", kg.label(conn.entity2)}};
    for (const auto& [var, canonical_value] : conn.metadata) {
        // Metadata holds canonical term text; show the label or lexical form.
        std::string shown = canonical_value;
        try {
            shown = display_text(kg, parse_term(canonical_value));
        } catch (const ParseError&) {
        }
        values.emplace(var, shown);
    }
    return fill_template(tmpl.text, values);
}

std::vector<BaselineResult> knowledge_baseline(const KnowledgeGraph& kg, std::span<const PatternQuery> queries,
                                               const TemplateSet& templates) {
    std::vector<BaselineResult> out;
    for (auto& conn : discover_connections(kg, queries)) {
        auto it = templates.find(conn.relationship_type);
        if (it == templates.end()) throw Error("no explanation template for relationship type '" +
                                               conn.relationship_type + "'");
        auto text = fill_explanation_template(kg, it->second, conn);
        out.push_back({std::move(conn), std::move(text), BaselineMethod::Knowledge, std::nullopt});
    }
    return out;
}

}  // namespace relex
