// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "relex/kg.hpp"

namespace relex {

// Declarative connection patterns.
//
// A query-set file holds one or more blocks of the form
//
//   CONNECTION born_in TYPE "born_in"
//     MATCH (?x <wdt:P19> ?y), (?y <rdfs:label> ?yl)
//     FILTER LANG(?yl) = "en"
//     ENTITIES ?x ?y
//     META ?yl
//     LABEL "{x} was born in {y}"
//
// `TYPE` defaults to the connection name. `PREFIX p: <ns>` lines declare IRI
// prefixes; inside `<...>` a declared prefix is expanded (`<wdt:P19>`). The
// prefixes wd, wdt, rdf and rdfs are predeclared. `#` starts a comment.

struct Variable {
    std::string name;
    friend bool operator==(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<Variable, Term>;

struct TriplePattern {
    PatternTerm subject;
    PatternTerm predicate;
    PatternTerm object;
};

struct LangFilter {
    std::string variable;
    std::string lang;
};

struct PatternQuery {
    std::string name;
    std::string relationship_type;
    std::vector<TriplePattern> patterns;
    std::vector<LangFilter> lang_filters;
    std::string entity1_var;
    std::string entity2_var;
    std::vector<std::string> metadata_vars;
    std::string label_template;

    // Distinct variables in the patterns, sorted by name.
    std::vector<std::string> variables() const;
};

// Total assignment of the query's variables.
using Binding = std::map<std::string, Term>;

// Discovered candidate relationship between two entities.
struct ConnectionInstance {
    Iri entity1;
    Iri entity2;
    std::string relationship_type;
    std::map<std::string, std::string> metadata;
    std::string explanation_text;

    friend bool operator==(const ConnectionInstance&, const ConnectionInstance&) = default;
};

// Parses a source holding exactly one CONNECTION block.
PatternQuery parse_pattern(std::string_view source);
std::vector<PatternQuery> parse_query_set(std::string_view source);
std::vector<PatternQuery> load_query_set_file(const std::string& path);

// `{name}` placeholders in a label template, in order of appearance.
std::vector<std::string> template_placeholders(std::string_view tmpl);

// Conjunctive evaluation, most selective pattern first. Result is sorted by
// the canonical text of the bound values, variables taken in name order.
std::vector<Binding> match_pattern(const KnowledgeGraph& kg, const PatternQuery& q);

std::vector<ConnectionInstance> discover_connections(const KnowledgeGraph& kg,
                                                     std::span<const PatternQuery> queries);

// Replaces `{name}` with values[name]; unknown names are left untouched.
std::string fill_template(std::string_view tmpl, const std::map<std::string, std::string>& values);

// Label for a bound value: the entity label for IRIs, lexical form otherwise.
std::string display_text(const KnowledgeGraph& kg, const Term& t);

}  // namespace relex
