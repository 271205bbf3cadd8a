// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/ingest.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "relex/error.hpp"

namespace relex {

namespace {

const std::map<std::string, std::string>& known_prefixes() {
    static const std::map<std::string, std::string> p{
        {"wd", "http://www.wikidata.org/entity/"},
        {"wdt", "http://www.wikidata.org/prop/direct/"},
        {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
        {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
        {"schema", "http://schema.org/"},
    };
    return p;
}

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw Error(std::string("cannot open ") + what + ": " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Splits on whitespace, keeping quoted literals (with suffixes) whole.
std::vector<std::string> split_fields(const std::string& line, std::size_t lineno) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        std::size_t start = i;
        if (line[i] == '"') {
            ++i;
            while (i < line.size() && line[i] != '"') i += line[i] == '\\' ? 2 : 1;
            if (i >= line.size()) throw ParseError("unterminated literal", lineno, start + 1, line.substr(start));
            ++i;
        }
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        out.push_back(line.substr(start, i - start));
    }
    return out;
}

Iri expand_iri(const std::string& text, std::size_t lineno, std::size_t column) {
    if (text.size() >= 2 && text.front() == '<' && text.back() == '>') return Iri(text.substr(1, text.size() - 2));
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        auto it = known_prefixes().find(text.substr(0, colon));
        if (it != known_prefixes().end() && colon + 1 < text.size()) return Iri(it->second + text.substr(colon + 1));
    }
    throw ParseError("expected IRI or known prefixed name", lineno, column, text);
}

std::size_t column_of(const std::string& line, const std::string& field) { return line.find(field) + 1; }

Term cell_term(const nlohmann::json& cell, const std::string& var) {
    auto type = cell.at("type").get<std::string>();
    auto value = cell.at("value").get<std::string>();
    if (type == "uri") return Iri(value);
    if (type == "literal" || type == "typed-literal") {
        std::optional<std::string> lang;
        std::optional<Iri> datatype;
        if (cell.contains("xml:lang")) {
            auto tag = cell["xml:lang"].get<std::string>();
            std::transform(tag.begin(), tag.end(), tag.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (!tag.empty()) lang = tag;
        }
        if (!lang && cell.contains("datatype")) datatype = Iri(cell["datatype"].get<std::string>());
        return Literal(std::move(value), std::move(lang), std::move(datatype));
    }
    throw BackendError(BackendError::Kind::MalformedResponse, "unknown cell type '" + type + "' for ?" + var);
}

bool transient(const BackendError& e) {
    if (e.kind() == BackendError::Kind::Network) return true;
    if (e.kind() != BackendError::Kind::HttpStatus) return false;
    return e.status() == 429 || e.status() >= 500;
}

}  // namespace

TripleMapping parse_mapping(std::string_view source) {
    TripleMapping m;
    std::istringstream in{std::string(source)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto f = split_fields(line, lineno);
        if (f.empty()) continue;
        if (f.size() != 3) throw ParseError("expected '?subject predicate object'", lineno, 1, line);
        if (f[0].size() < 2 || f[0][0] != '?')
            throw ParseError("subject must be a variable", lineno, column_of(line, f[0]), f[0]);
        MappingRule r{f[0].substr(1), expand_iri(f[1], lineno, column_of(line, f[1])), std::string()};
        if (f[2].size() >= 2 && f[2][0] == '?') {
            r.object = f[2].substr(1);
        } else if (f[2][0] == '<' || f[2][0] == '"') {
            try {
                r.object = parse_term(f[2]);
            } catch (const ParseError&) {
                throw ParseError("invalid constant term", lineno, column_of(line, f[2]), f[2]);
            }
        } else {
            r.object = Term{expand_iri(f[2], lineno, column_of(line, f[2]))};
        }
        m.rules.push_back(std::move(r));
    }
    return m;
}

TripleMapping load_mapping_file(const std::string& path) { return parse_mapping(read_file(path, "mapping file")); }

ResultTable parse_sparql_json(std::string_view body) {
    ResultTable t;
    try {
        auto doc = nlohmann::json::parse(body);
        for (const auto& v : doc.at("head").at("vars")) t.variables.push_back(v.get<std::string>());
        std::set<std::string> declared(t.variables.begin(), t.variables.end());
        for (const auto& b : doc.at("results").at("bindings")) {
            std::map<std::string, Term> row;
            for (const auto& [var, cell] : b.items()) {
                if (!declared.count(var))
                    throw BackendError(BackendError::Kind::MalformedResponse, "undeclared variable ?" + var);
                if (cell.at("type").get<std::string>() == "bnode") continue;
                row.emplace(var, cell_term(cell, var));
            }
            t.rows.push_back(std::move(row));
        }
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(BackendError::Kind::MalformedResponse, std::string("query results: ") + e.what());
    } catch (const Error& e) {
        if (dynamic_cast<const BackendError*>(&e)) throw;
        throw BackendError(BackendError::Kind::MalformedResponse, std::string("query results: ") + e.what());
    }
    return t;
}

std::string paged_query(const std::string& query, std::size_t limit, std::size_t offset) {
    return query + "\nLIMIT " + std::to_string(limit) + " OFFSET " + std::to_string(offset);
}

ResultTable fetch_remote(const FetchOptions& options, const std::string& query) {
    if (options.attempts < 1) throw DomainError("attempts must be at least 1");
    auto fetch_page = [&](const std::string& text) {
        int delay = options.backoff_ms;
        for (int attempt = 1;; ++attempt) {
            try {
                auto body = http_get(options.endpoint, {{"query", text}, {"format", "json"}},
                                     "application/sparql-results+json");
                return parse_sparql_json(body);
            } catch (const BackendError& e) {
                if (!transient(e) || attempt >= options.attempts) throw;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
            delay *= 2;
        }
    };

    const auto cap = options.max_rows.value_or(static_cast<std::size_t>(-1));
    if (options.page_size == 0) {
        auto t = fetch_page(query);
        if (t.rows.size() > cap) t.rows.resize(cap);
        return t;
    }

    ResultTable out;
    std::size_t offset = 0;
    for (bool first = true;; first = false) {
        auto want = std::min(options.page_size, cap - out.rows.size());
        auto page = fetch_page(paged_query(query, want, offset));
        if (first) out.variables = page.variables;
        else if (page.variables != out.variables)
            throw BackendError(BackendError::Kind::MalformedResponse, "variables changed between pages");
        auto got = page.rows.size();
        for (auto& r : page.rows) {
            if (out.rows.size() == cap) break;
            out.rows.push_back(std::move(r));
        }
        offset += got;
        if (got < want || out.rows.size() >= cap) break;
    }
    return out;
}

std::vector<Triple> table_to_triples(const ResultTable& t, const TripleMapping& m) {
    std::set<std::string> declared(t.variables.begin(), t.variables.end());
    for (const auto& r : m.rules) {
        if (!declared.count(r.subject_var)) throw Error("mapping references undeclared variable ?" + r.subject_var);
        if (auto v = std::get_if<std::string>(&r.object); v && !declared.count(*v))
            throw Error("mapping references undeclared variable ?" + *v);
    }

    std::set<std::string> seen;
    std::vector<Triple> out;
    for (const auto& row : t.rows) {
        for (const auto& r : m.rules) {
            auto s = row.find(r.subject_var);
            if (s == row.end() || !is_iri(s->second)) continue;
            const Term* obj = nullptr;
            if (auto v = std::get_if<std::string>(&r.object)) {
                auto o = row.find(*v);
                if (o == row.end()) continue;
                obj = &o->second;
            } else {
                obj = &std::get<Term>(r.object);
            }
            Triple tr{std::get<Iri>(s->second), r.predicate, *obj};
            if (seen.insert(canonical(tr)).second) out.push_back(std::move(tr));
        }
    }
    return out;
}

std::size_t export_ntriples(std::span<const Triple> triples, std::ostream& sink) {
    return write_ntriples(triples, sink);
}

Preset load_preset(const std::string& directory, const std::string& name) {
    auto base = directory + "/" + name;
    return Preset{name, read_file(base + ".rq", "preset query"), load_mapping_file(base + ".map")};
}

}  // namespace relex
