// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "relex/http.hpp"
#include "relex/kg.hpp"

namespace relex {

// Tabular query result. Absent keys are unbound cells.
struct ResultTable {
    std::vector<std::string> variables;
    std::vector<std::map<std::string, Term>> rows;

    friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

struct MappingRule {
    std::string subject_var;
    Iri predicate;
    std::variant<std::string, Term> object;  // variable name or constant
};

struct TripleMapping {
    std::vector<MappingRule> rules;
};

// One rule per line: `?s <predicate> ?o` or `?s <predicate> <constant>`.
// Predicates and constants may use `prefix:local` with the wd, wdt, rdf, rdfs
// and schema prefixes; constants may also be literals. `#` starts a comment.
TripleMapping parse_mapping(std::string_view source);
TripleMapping load_mapping_file(const std::string& path);

// Parses a SPARQL 1.1 JSON results document. Blank-node cells are treated as
// unbound. Throws BackendError(MalformedResponse).
ResultTable parse_sparql_json(std::string_view body);

struct FetchOptions {
    HttpEndpoint endpoint;
    // Rows per request; appended to the query as LIMIT/OFFSET. 0 sends the
    // query once, unmodified.
    std::size_t page_size = 1000;
    std::optional<std::size_t> max_rows;
    int attempts = 3;
    int backoff_ms = 500;  // doubled after each failed attempt
};

// Runs `query` (opaque text) against the endpoint and concatenates pages.
// Network errors, 429 and 5xx responses are retried.
ResultTable fetch_remote(const FetchOptions& options, const std::string& query);

// Page text actually sent for the page starting at `offset`.
std::string paged_query(const std::string& query, std::size_t limit, std::size_t offset);

// Throws Error when a rule names a variable missing from t.variables.
std::vector<Triple> table_to_triples(const ResultTable& t, const TripleMapping& m);

std::size_t export_ntriples(std::span<const Triple> triples, std::ostream& sink);

// A named extraction: `<name>.rq` plus `<name>.map` in a presets directory.
struct Preset {
    std::string name;
    std::string query;
    TripleMapping mapping;
};
Preset load_preset(const std::string& directory, const std::string& name);

}  // namespace relex
