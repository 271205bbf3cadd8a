// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace relex {

namespace vocab {
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfsLabel = "http://www.w3.org/2000/01/rdf-schema#label";
inline constexpr std::string_view kInstanceOf = "http://www.wikidata.org/prop/direct/P31";
inline constexpr std::string_view kOccupation = "http://www.wikidata.org/prop/direct/P106";
}  // namespace vocab

// Opaque entity or predicate identifier. Never empty; never contains
// whitespace or angle brackets.
class Iri {
public:
    explicit Iri(std::string value);

    const std::string& value() const noexcept { return value_; }

    // Text after the last '/', '#' or ':'; the whole value if that is empty.
    std::string local_name() const;

    friend auto operator<=>(const Iri&, const Iri&) = default;
    friend bool operator==(const Iri&, const Iri&) = default;

private:
    std::string value_;
};

// Lexical form with at most one of a language tag or a datatype.
class Literal {
public:
    explicit Literal(std::string lexical, std::optional<std::string> lang = std::nullopt,
                     std::optional<Iri> datatype = std::nullopt);

    const std::string& lexical() const noexcept { return lexical_; }
    const std::optional<std::string>& lang() const noexcept { return lang_; }
    const std::optional<Iri>& datatype() const noexcept { return datatype_; }

    friend bool operator==(const Literal&, const Literal&) = default;

private:
    std::string lexical_;
    std::optional<std::string> lang_;
    std::optional<Iri> datatype_;
};

using Term = std::variant<Iri, Literal>;

inline bool is_iri(const Term& t) noexcept { return std::holds_alternative<Iri>(t); }

// Serialized N-Triples form: `<iri>`, `"lex"`, `"lex"@en`, `"lex"^^<dt>`.
std::string canonical(const Iri& iri);
std::string canonical(const Literal& lit);
std::string canonical(const Term& term);

struct Triple {
    Iri subject;
    Iri predicate;
    Term object;

    friend bool operator==(const Triple&, const Triple&) = default;
};

// `<s> <p> o .` without trailing newline.
std::string canonical(const Triple& t);

using TermId = std::uint32_t;

// Triple over interned term ids. Ids are assigned in canonical-text order, so
// comparing ids compares canonical text.
struct IdTriple {
    TermId s;
    TermId p;
    TermId o;

    friend auto operator<=>(const IdTriple&, const IdTriple&) = default;
};

enum class Direction { Out, In };
enum class NeighborMode { Out, In, Both };

struct Neighbor {
    Iri node;
    Iri predicate;
    Direction direction;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct GraphOptions {
    std::string label_predicate{vocab::kRdfsLabel};
    std::string preferred_lang{"en"};
    std::vector<std::string> fact_predicates{std::string(vocab::kInstanceOf),
                                             std::string(vocab::kOccupation)};
    std::size_t max_facts = 3;
};

struct EntityDescriptor {
    Iri id;
    std::string label;
    std::string description;
};

// Immutable, indexed triple set. Build a new graph to change it.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;
    explicit KnowledgeGraph(std::vector<Triple> triples, GraphOptions options = {});

    std::size_t size() const noexcept { return spo_.size(); }
    bool empty() const noexcept { return spo_.empty(); }

    // Distinct IRIs occurring in subject or object position.
    std::size_t entity_count() const noexcept { return entity_count_; }

    const GraphOptions& options() const noexcept { return options_; }

    // Triples matching every bound position, ordered by canonical (s, p, o).
    std::vector<Triple> lookup(const std::optional<Iri>& s, const std::optional<Iri>& p,
                               const std::optional<Term>& o) const;

    // All triples in canonical order.
    std::vector<Triple> triples() const;

    // IRI-valued neighbours ordered by (neighbour, predicate, direction).
    // Literal objects are never neighbours.
    std::vector<Neighbor> neighbors(const Iri& e, NeighborMode mode) const;

    // Preferred label from the configured label predicate, else the local name.
    std::string label(const Iri& e) const;
    // Label only if the graph holds one.
    std::optional<std::string> explicit_label(const Iri& e) const;

    EntityDescriptor describe(const Iri& e) const;

    // Every entity carrying an explicit label, in canonical order.
    std::vector<Iri> labelled_entities() const;

    // --- id-level access for the matcher and path kernels ---
    std::optional<TermId> id_of(const Term& t) const;
    std::optional<TermId> id_of(const Iri& iri) const { return id_of(Term{iri}); }
    const Term& term(TermId id) const { return terms_.at(id); }
    const std::string& canonical_text(TermId id) const { return canonical_.at(id); }
    std::size_t term_count() const noexcept { return terms_.size(); }
    bool is_iri_id(TermId id) const { return is_iri(terms_.at(id)); }

    std::span<const IdTriple> spo() const noexcept { return spo_; }

    // Contiguous index range holding exactly the triples matching the bound
    // ids. Row order depends on the index chosen.
    std::span<const IdTriple> match_ids(std::optional<TermId> s, std::optional<TermId> p,
                                        std::optional<TermId> o) const;

    Triple materialize(const IdTriple& t) const;

private:
    GraphOptions options_;
    std::vector<Term> terms_;
    std::vector<std::string> canonical_;
    std::unordered_map<std::string, TermId> ids_;
    std::vector<IdTriple> spo_;
    std::vector<IdTriple> pos_;
    std::vector<IdTriple> osp_;
    std::unordered_map<TermId, std::string> labels_;
    std::size_t entity_count_ = 0;
};

// --- N-Triples subset ---

std::vector<Triple> parse_ntriples(std::istream& in);
// Parses one canonical term (`<iri>` or a literal); throws ParseError.
Term parse_term(std::string_view text);
KnowledgeGraph load_ntriples(std::istream& in, GraphOptions options = {});
KnowledgeGraph load_ntriples_file(const std::string& path, GraphOptions options = {});

// Writes one line per distinct triple in canonical order; returns lines written.
std::size_t write_ntriples(std::span<const Triple> triples, std::ostream& out);

}  // namespace relex
