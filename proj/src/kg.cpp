// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/kg.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>

#include "relex/error.hpp"

namespace relex {

namespace {

bool valid_iri_char(char c) {
    return !(c == '<' || c == '>' || c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
             c == '\f' || c == '\v');
}

std::string escape_lexical(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out;
}

template <typename Key>
std::span<const IdTriple> prefix_range(const std::vector<IdTriple>& index, const IdTriple& probe,
                                       int bound, Key key) {
    auto less = [&](const IdTriple& a, const IdTriple& b) {
        auto ka = key(a);
        auto kb = key(b);
        for (int i = 0; i < bound; ++i) {
            if (ka[i] != kb[i]) return ka[i] < kb[i];
        }
        return false;
    };
    auto [lo, hi] = std::equal_range(index.begin(), index.end(), probe, less);
    return {lo, hi};
}

std::array<TermId, 3> key_spo(const IdTriple& t) { return {t.s, t.p, t.o}; }
std::array<TermId, 3> key_pos(const IdTriple& t) { return {t.p, t.o, t.s}; }
std::array<TermId, 3> key_osp(const IdTriple& t) { return {t.o, t.s, t.p}; }

}  // namespace

Iri::Iri(std::string value) : value_(std::move(value)) {
    if (value_.empty()) throw DomainError("IRI must not be empty");
    if (!std::all_of(value_.begin(), value_.end(), valid_iri_char))
        throw DomainError("IRI contains whitespace or angle brackets: " + value_);
}

std::string Iri::local_name() const {
    auto pos = value_.find_last_of("/#:");
    if (pos == std::string::npos || pos + 1 == value_.size()) return value_;
    return value_.substr(pos + 1);
}

Literal::Literal(std::string lexical, std::optional<std::string> lang,
                 std::optional<Iri> datatype)
    : lexical_(std::move(lexical)), lang_(std::move(lang)), datatype_(std::move(datatype)) {
    if (lang_ && datatype_) throw DomainError("literal cannot carry both language and datatype");
    if (lang_ && lang_->empty()) throw DomainError("empty language tag");
}

std::string canonical(const Iri& iri) { return "<" + iri.value() + ">"; }

std::string canonical(const Literal& lit) {
    std::string out = "\"" + escape_lexical(lit.lexical()) + "\"";
    if (lit.lang()) out += "@" + *lit.lang();
    if (lit.datatype()) out += "^^" + canonical(*lit.datatype());
    return out;
}

std::string canonical(const Term& term) {
    return std::visit([](const auto& t) { return canonical(t); }, term);
}

std::string canonical(const Triple& t) {
    return canonical(t.subject) + " " + canonical(t.predicate) + " " + canonical(t.object) + " .";
}

KnowledgeGraph::KnowledgeGraph(std::vector<Triple> triples, GraphOptions options)
    : options_(std::move(options)) {
    // Intern terms in canonical order so that id order is canonical order.
    std::set<std::string> texts;
    std::unordered_map<std::string, const Term*> exemplar;
    auto note = [&](const Term& t) {
        auto text = canonical(t);
        auto [it, inserted] = texts.insert(text);
        if (inserted) exemplar.emplace(*it, &t);
    };
    std::vector<Term> subject_terms;
    std::vector<Term> predicate_terms;
    subject_terms.reserve(triples.size());
    predicate_terms.reserve(triples.size());
    for (const auto& t : triples) {
        subject_terms.emplace_back(t.subject);
        predicate_terms.emplace_back(t.predicate);
    }
    for (std::size_t i = 0; i < triples.size(); ++i) {
        note(subject_terms[i]);
        note(predicate_terms[i]);
        note(triples[i].object);
    }

    terms_.reserve(texts.size());
    canonical_.reserve(texts.size());
    for (const auto& text : texts) {
        ids_.emplace(text, static_cast<TermId>(terms_.size()));
        terms_.push_back(*exemplar.at(text));
        canonical_.push_back(text);
    }

    spo_.reserve(triples.size());
    for (std::size_t i = 0; i < triples.size(); ++i) {
        spo_.push_back({ids_.at(canonical(subject_terms[i])), ids_.at(canonical(predicate_terms[i])),
                        ids_.at(canonical(triples[i].object))});
    }
    std::sort(spo_.begin(), spo_.end());
    spo_.erase(std::unique(spo_.begin(), spo_.end()), spo_.end());

    pos_ = spo_;
    std::sort(pos_.begin(), pos_.end(),
              [](const IdTriple& a, const IdTriple& b) { return key_pos(a) < key_pos(b); });
    osp_ = spo_;
    std::sort(osp_.begin(), osp_.end(),
              [](const IdTriple& a, const IdTriple& b) { return key_osp(a) < key_osp(b); });

    std::vector<bool> entity(terms_.size(), false);
    for (const auto& t : spo_) {
        entity[t.s] = true;
        if (is_iri(terms_[t.o])) entity[t.o] = true;
    }
    entity_count_ = static_cast<std::size_t>(std::count(entity.begin(), entity.end(), true));

    // Preferred label: preferred language, then untagged, then anything; first
    // in canonical order within each class.
    if (auto label_id = id_of(Iri(options_.label_predicate))) {
        std::unordered_map<TermId, std::pair<int, TermId>> best;
        for (const auto& t : match_ids(std::nullopt, *label_id, std::nullopt)) {
            const auto* lit = std::get_if<Literal>(&terms_[t.o]);
            if (!lit) continue;
            int r = 2;
            if (lit->lang() && *lit->lang() == options_.preferred_lang) r = 0;
            else if (!lit->lang()) r = 1;
            std::pair<int, TermId> cand{r, t.o};
            auto [it, inserted] = best.emplace(t.s, cand);
            if (!inserted && cand < it->second) it->second = cand;
        }
        for (const auto& [subject, choice] : best)
            labels_.emplace(subject, std::get<Literal>(terms_[choice.second]).lexical());
    }
}

std::optional<TermId> KnowledgeGraph::id_of(const Term& t) const {
    auto it = ids_.find(canonical(t));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::span<const IdTriple> KnowledgeGraph::match_ids(std::optional<TermId> s,
                                                    std::optional<TermId> p,
                                                    std::optional<TermId> o) const {
    IdTriple probe{s.value_or(0), p.value_or(0), o.value_or(0)};
    if (s) {
        if (o && !p) return prefix_range(osp_, probe, 2, key_osp);
        return prefix_range(spo_, probe, p ? (o ? 3 : 2) : 1, key_spo);
    }
    if (p) return prefix_range(pos_, probe, o ? 2 : 1, key_pos);
    if (o) return prefix_range(osp_, probe, 1, key_osp);
    return spo_;
}

Triple KnowledgeGraph::materialize(const IdTriple& t) const {
    return Triple{std::get<Iri>(terms_[t.s]), std::get<Iri>(terms_[t.p]), terms_[t.o]};
}

std::vector<Triple> KnowledgeGraph::lookup(const std::optional<Iri>& s,
                                           const std::optional<Iri>& p,
                                           const std::optional<Term>& o) const {
    std::optional<TermId> sid, pid, oid;
    if (s && !(sid = id_of(*s))) return {};
    if (p && !(pid = id_of(*p))) return {};
    if (o && !(oid = id_of(*o))) return {};
    auto rows = match_ids(sid, pid, oid);
    std::vector<IdTriple> sorted(rows.begin(), rows.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<Triple> out;
    out.reserve(sorted.size());
    for (const auto& t : sorted) out.push_back(materialize(t));
    return out;
}

std::vector<Triple> KnowledgeGraph::triples() const {
    return lookup(std::nullopt, std::nullopt, std::nullopt);
}

std::vector<Neighbor> KnowledgeGraph::neighbors(const Iri& e, NeighborMode mode) const {
    auto id = id_of(e);
    if (!id) return {};
    struct Row {
        TermId node;
        TermId pred;
        Direction dir;
    };
    std::vector<Row> rows;
    if (mode != NeighborMode::In) {
        for (const auto& t : match_ids(*id, std::nullopt, std::nullopt))
            if (is_iri(terms_[t.o])) rows.push_back({t.o, t.p, Direction::Out});
    }
    if (mode != NeighborMode::Out) {
        for (const auto& t : match_ids(std::nullopt, std::nullopt, *id))
            rows.push_back({t.s, t.p, Direction::In});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.node != b.node) return a.node < b.node;
        if (a.pred != b.pred) return a.pred < b.pred;
        return a.dir == Direction::Out && b.dir == Direction::In;
    });
    std::vector<Neighbor> out;
    out.reserve(rows.size());
    for (const auto& r : rows)
        out.push_back({std::get<Iri>(terms_[r.node]), std::get<Iri>(terms_[r.pred]), r.dir});
    return out;
}

std::optional<std::string> KnowledgeGraph::explicit_label(const Iri& e) const {
    auto id = id_of(e);
    if (!id) return std::nullopt;
    auto it = labels_.find(*id);
    if (it == labels_.end()) return std::nullopt;
    return it->second;
}

std::string KnowledgeGraph::label(const Iri& e) const {
    if (auto l = explicit_label(e)) return *l;
    return e.local_name();
}

std::vector<Iri> KnowledgeGraph::labelled_entities() const {
    std::vector<TermId> ids;
    ids.reserve(labels_.size());
    for (const auto& [id, _] : labels_) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    std::vector<Iri> out;
    out.reserve(ids.size());
    for (auto id : ids) out.push_back(std::get<Iri>(terms_[id]));
    return out;
}

EntityDescriptor KnowledgeGraph::describe(const Iri& e) const {
    EntityDescriptor d{e, label(e), {}};
    std::vector<std::string> facts;
    auto id = id_of(e);
    if (id) {
        for (const auto& pred : options_.fact_predicates) {
            if (facts.size() >= options_.max_facts) break;
            auto pid = id_of(Iri(pred));
            if (!pid) continue;
            std::vector<TermId> objects;
            for (const auto& t : match_ids(*id, *pid, std::nullopt)) objects.push_back(t.o);
            std::sort(objects.begin(), objects.end());
            for (auto o : objects) {
                if (facts.size() >= options_.max_facts) break;
                const auto& term = terms_[o];
                if (const auto* iri = std::get_if<Iri>(&term)) facts.push_back(label(*iri));
                else facts.push_back(std::get<Literal>(term).lexical());
            }
        }
    }
    d.description = d.label;
    if (!facts.empty()) {
        d.description += " (";
        for (std::size_t i = 0; i < facts.size(); ++i) {
            if (i) d.description += ", ";
            d.description += facts[i];
        }
        d.description += ")";
    }
    return d;
}

}  // namespace relex
