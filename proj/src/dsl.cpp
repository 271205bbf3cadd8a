// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "relex/error.hpp"

namespace relex {

namespace {

enum class Tok { Word, Var, IriRef, String, LParen, RParen, Comma, Equals, At, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

const char* describe(Tok t) {
    switch (t) {
    case Tok::Word: return "keyword";
    case Tok::Var: return "variable";
    case Tok::IriRef: return "IRI";
    case Tok::String: return "string";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Equals: return "'='";
    case Tok::At: return "'@'";
    case Tok::End: return "end of input";
    }
    return "token";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance();
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        std::size_t tl = line, tc = col;
        switch (c) {
        case '(': out.push_back({Tok::LParen, "(", tl, tc}); advance(); continue;
        case ')': out.push_back({Tok::RParen, ")", tl, tc}); advance(); continue;
        case ',': out.push_back({Tok::Comma, ",", tl, tc}); advance(); continue;
        case '=': out.push_back({Tok::Equals, "=", tl, tc}); advance(); continue;
        case '@': out.push_back({Tok::At, "@", tl, tc}); advance(); continue;
        default: break;
        }
        if (c == '?') {
            advance();
            std::string name;
            if (i >= src.size() || !ident_start(src[i]))
                throw ParseError("malformed variable name", tl, tc, "?");
            while (i < src.size() && ident_char(src[i])) {
                name += src[i];
                advance();
            }
            out.push_back({Tok::Var, name, tl, tc});
            continue;
        }
        if (c == '<') {
            advance();
            std::string value;
            while (i < src.size() && src[i] != '>') {
                if (std::isspace(static_cast<unsigned char>(src[i])) || src[i] == '<')
                    throw ParseError("malformed IRI", tl, tc, "<" + value);
                value += src[i];
                advance();
            }
            if (i >= src.size()) throw ParseError("unterminated IRI", tl, tc, "<" + value);
            advance();
            if (value.empty()) throw ParseError("empty IRI", tl, tc, "<>");
            out.push_back({Tok::IriRef, value, tl, tc});
            continue;
        }
        if (c == '"') {
            advance();
            std::string value;
            bool closed = false;
            while (i < src.size()) {
                char d = src[i];
                if (d == '"') {
                    closed = true;
                    advance();
                    break;
                }
                if (d == '\n') break;
                if (d == '\\' && i + 1 < src.size()) {
                    char e = src[i + 1];
                    if (e == '"') value += '"';
                    else if (e == '\\') value += '\\';
                    else if (e == 'n') value += '\n';
                    else if (e == 't') value += '\t';
                    else throw ParseError("unsupported escape in string", line, col, std::string("\\") + e);
                    advance(2);
                    continue;
                }
                value += d;
                advance();
            }
            if (!closed) throw ParseError("unterminated string", tl, tc, "\"" + value);
            out.push_back({Tok::String, value, tl, tc});
            continue;
        }
        if (ident_start(c)) {
            std::string word;
            while (i < src.size() && (ident_char(src[i]) || src[i] == '-' || src[i] == ':')) {
                word += src[i];
                advance();
            }
            out.push_back({Tok::Word, word, tl, tc});
            continue;
        }
        throw ParseError("unexpected character", tl, tc, std::string(1, c));
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

struct Located {
    std::size_t line;
    std::size_t column;
};

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {
        prefixes_ = {
            {"wd", "http://www.wikidata.org/entity/"},
            {"wdt", "http://www.wikidata.org/prop/direct/"},
            {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
            {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
        };
    }

    std::vector<PatternQuery> parse_all() {
        std::vector<PatternQuery> out;
        std::set<std::string> names;
        while (peek().kind != Tok::End) {
            if (is_word("PREFIX")) {
                parse_prefix();
                continue;
            }
            const Token& start = peek();
            auto q = parse_block();
            if (!names.insert(q.name).second)
                throw ParseError("duplicate connection name", start.line, start.column, q.name);
            out.push_back(std::move(q));
        }
        return out;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool is_word(std::string_view w) const {
        return peek().kind == Tok::Word && peek().text == w;
    }

    [[noreturn]] void fail_at(const Token& t, const std::string& what) const {
        throw ParseError(what, t.line, t.column, t.kind == Tok::End ? std::string("<end>") : t.text);
    }

    const Token& expect(Tok kind, const std::string& what) {
        if (peek().kind != kind)
            fail_at(peek(), "expected " + what + ", found " + describe(peek().kind));
        return next();
    }

    void expect_word(std::string_view w) {
        if (!is_word(w)) fail_at(peek(), "expected " + std::string(w));
        next();
    }

    void parse_prefix() {
        next();
        const Token& name = expect(Tok::Word, "prefix name");
        if (name.text.empty() || name.text.back() != ':')
            fail_at(name, "prefix name must end with ':'");
        const Token& ns = expect(Tok::IriRef, "namespace IRI");
        prefixes_[name.text.substr(0, name.text.size() - 1)] = ns.text;
    }

    Iri expand(const Token& t) const {
        auto colon = t.text.find(':');
        if (colon != std::string::npos && t.text.compare(colon, 3, "://") != 0) {
            auto it = prefixes_.find(t.text.substr(0, colon));
            if (it != prefixes_.end()) return Iri(it->second + t.text.substr(colon + 1));
        }
        return Iri(t.text);
    }

    PatternTerm parse_term(std::set<std::string>& vars) {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Var:
            next();
            vars.insert(t.text);
            return Variable{t.text};
        case Tok::IriRef:
            next();
            return Term{expand(t)};
        case Tok::String: {
            next();
            std::string lexical = t.text;
            if (peek().kind == Tok::At) {
                next();
                const Token& tag = expect(Tok::Word, "language tag");
                std::string lang = tag.text;
                std::transform(lang.begin(), lang.end(), lang.begin(),
                               [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
                return Term{Literal(std::move(lexical), std::move(lang))};
            }
            return Term{Literal(std::move(lexical))};
        }
        default:
            fail_at(t, "expected term (?var, <iri> or \"literal\")");
        }
    }

    TriplePattern parse_triple(std::set<std::string>& vars) {
        expect(Tok::LParen, "'('");
        TriplePattern tp{parse_term(vars), parse_term(vars), parse_term(vars)};
        expect(Tok::RParen, "')'");
        return tp;
    }

    PatternQuery parse_block() {
        PatternQuery q;
        expect_word("CONNECTION");
        const Token& name = expect(Tok::Word, "connection name");
        q.name = name.text;
        q.relationship_type = q.name;
        if (is_word("TYPE")) {
            next();
            const Token& type = expect(Tok::String, "relationship type string");
            if (type.text.empty()) fail_at(type, "relationship type must not be empty");
            q.relationship_type = type.text;
        }

        std::set<std::string> vars;
        expect_word("MATCH");
        q.patterns.push_back(parse_triple(vars));
        while (peek().kind == Tok::Comma) {
            next();
            q.patterns.push_back(parse_triple(vars));
        }

        std::vector<std::pair<std::string, Located>> referenced;
        while (is_word("FILTER")) {
            next();
            expect_word("LANG");
            expect(Tok::LParen, "'('");
            const Token& v = expect(Tok::Var, "variable");
            expect(Tok::RParen, "')'");
            expect(Tok::Equals, "'='");
            const Token& tag = expect(Tok::String, "language tag string");
            if (tag.text.empty()) fail_at(tag, "empty language tag");
            std::string lang = tag.text;
            std::transform(lang.begin(), lang.end(), lang.begin(),
                           [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
            q.lang_filters.push_back({v.text, lang});
            referenced.push_back({v.text, {v.line, v.column}});
        }

        expect_word("ENTITIES");
        const Token& e1 = expect(Tok::Var, "first entity variable");
        const Token& e2 = expect(Tok::Var, "second entity variable");
        q.entity1_var = e1.text;
        q.entity2_var = e2.text;
        referenced.push_back({e1.text, {e1.line, e1.column}});
        referenced.push_back({e2.text, {e2.line, e2.column}});
        if (e1.text == e2.text) fail_at(e2, "entity variables must differ");

        if (is_word("META")) {
            next();
            if (peek().kind != Tok::Var) fail_at(peek(), "expected at least one META variable");
            while (peek().kind == Tok::Var) {
                const Token& m = next();
                q.metadata_vars.push_back(m.text);
                referenced.push_back({m.text, {m.line, m.column}});
            }
        }

        expect_word("LABEL");
        const Token& label = expect(Tok::String, "label template string");
        if (label.text.empty()) fail_at(label, "label template must not be empty");
        q.label_template = label.text;
        for (const auto& ph : template_placeholders(label.text))
            referenced.push_back({ph, {label.line, label.column}});

        for (const auto& [var, at] : referenced) {
            if (!vars.count(var))
                throw ParseError("variable does not occur in any MATCH pattern", at.line, at.column,
                                 "?" + var);
        }
        return q;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::map<std::string, std::string> prefixes_;
};

// ---- matching ----

struct SlotPattern {
    // Either a variable slot (>= 0) or a constant term id; `missing` marks a
    // constant that does not occur in the graph (pattern can never match).
    struct Pos {
        int slot = -1;
        std::optional<TermId> constant;
        bool missing = false;
    };
    Pos s, p, o;
};

class Matcher {
public:
    Matcher(const KnowledgeGraph& kg, const PatternQuery& q) : kg_(kg), q_(q) {
        vars_ = q.variables();
        for (std::size_t i = 0; i < vars_.size(); ++i) slot_of_[vars_[i]] = static_cast<int>(i);
        for (const auto& tp : q.patterns) patterns_.push_back({pos(tp.subject), pos(tp.predicate), pos(tp.object)});
        for (const auto& f : q.lang_filters) filters_.push_back({slot_of_.at(f.variable), f.lang});
    }

    std::vector<std::vector<TermId>> run() {
        for (const auto& sp : patterns_)
            if (sp.s.missing || sp.p.missing || sp.o.missing) return {};
        binding_.assign(vars_.size(), std::nullopt);
        done_.assign(patterns_.size(), false);
        search(0);
        std::sort(results_.begin(), results_.end());
        results_.erase(std::unique(results_.begin(), results_.end()), results_.end());
        return std::move(results_);
    }

    const std::vector<std::string>& vars() const { return vars_; }

private:
    SlotPattern::Pos pos(const PatternTerm& t) const {
        SlotPattern::Pos out;
        if (const auto* v = std::get_if<Variable>(&t)) {
            out.slot = slot_of_.at(v->name);
        } else {
            out.constant = kg_.id_of(std::get<Term>(t));
            out.missing = !out.constant;
        }
        return out;
    }

    std::optional<TermId> resolve(const SlotPattern::Pos& p) const {
        if (p.slot >= 0) return binding_[p.slot];
        return p.constant;
    }

    std::span<const IdTriple> candidates(const SlotPattern& sp) const {
        return kg_.match_ids(resolve(sp.s), resolve(sp.p), resolve(sp.o));
    }

    bool passes_filters() const {
        for (const auto& [slot, lang] : filters_) {
            const auto* lit = std::get_if<Literal>(&kg_.term(*binding_[slot]));
            if (!lit || !lit->lang() || *lit->lang() != lang) return false;
        }
        return true;
    }

    void search(std::size_t depth) {
        if (depth == patterns_.size()) {
            if (!passes_filters()) return;
            std::vector<TermId> row;
            row.reserve(binding_.size());
            for (const auto& b : binding_) row.push_back(*b);
            results_.push_back(std::move(row));
            return;
        }
        // Most selective remaining pattern under the current partial binding.
        std::size_t best = patterns_.size();
        std::size_t best_count = 0;
        for (std::size_t i = 0; i < patterns_.size(); ++i) {
            if (done_[i]) continue;
            auto n = candidates(patterns_[i]).size();
            if (best == patterns_.size() || n < best_count) {
                best = i;
                best_count = n;
            }
        }
        if (best_count == 0) return;
        const auto& sp = patterns_[best];
        done_[best] = true;
        for (const auto& t : candidates(sp)) {
            std::vector<int> newly;
            if (bind(sp.s, t.s, newly) && bind(sp.p, t.p, newly) && bind(sp.o, t.o, newly))
                search(depth + 1);
            for (int slot : newly) binding_[slot].reset();
        }
        done_[best] = false;
    }

    bool bind(const SlotPattern::Pos& p, TermId value, std::vector<int>& newly) {
        if (p.slot < 0) return true;
        auto& b = binding_[p.slot];
        if (b) return *b == value;
        b = value;
        newly.push_back(p.slot);
        return true;
    }

    const KnowledgeGraph& kg_;
    const PatternQuery& q_;
    std::vector<std::string> vars_;
    std::map<std::string, int> slot_of_;
    std::vector<SlotPattern> patterns_;
    std::vector<std::pair<int, std::string>> filters_;
    std::vector<std::optional<TermId>> binding_;
    std::vector<bool> done_;
    std::vector<std::vector<TermId>> results_;
};

}  // namespace

std::vector<std::string> PatternQuery::variables() const {
    std::set<std::string> names;
    auto note = [&](const PatternTerm& t) {
        if (const auto* v = std::get_if<Variable>(&t)) names.insert(v->name);
    };
    for (const auto& tp : patterns) {
        note(tp.subject);
        note(tp.predicate);
        note(tp.object);
    }
    return {names.begin(), names.end()};
}

std::vector<std::string> template_placeholders(std::string_view tmpl) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while ((i = tmpl.find('{', i)) != std::string_view::npos) {
        auto close = tmpl.find('}', i + 1);
        if (close == std::string_view::npos) break;
        auto name = tmpl.substr(i + 1, close - i - 1);
        bool ok = !name.empty() && ident_start(name.front()) &&
                  std::all_of(name.begin(), name.end(), ident_char);
        if (ok) {
            out.emplace_back(name);
            i = close + 1;
        } else {
            ++i;
        }
    }
    return out;
}

std::string fill_template(std::string_view tmpl, const std::map<std::string, std::string>& values) {
    std::string out;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            auto close = tmpl.find('}', i + 1);
            if (close != std::string_view::npos) {
                auto it = values.find(std::string(tmpl.substr(i + 1, close - i - 1)));
                if (it != values.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += tmpl[i++];
    }
    return out;
}

PatternQuery parse_pattern(std::string_view source) {
    auto all = Parser(source).parse_all();
    if (all.size() != 1)
        throw ParseError("expected exactly one CONNECTION block, found " + std::to_string(all.size()), 1, 1);
    return std::move(all.front());
}

std::vector<PatternQuery> parse_query_set(std::string_view source) { return Parser(source).parse_all(); }

std::vector<PatternQuery> load_query_set_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open query set: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_query_set(ss.str());
}

std::vector<Binding> match_pattern(const KnowledgeGraph& kg, const PatternQuery& q) {
    Matcher m(kg, q);
    auto rows = m.run();
    std::vector<Binding> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        Binding b;
        for (std::size_t i = 0; i < row.size(); ++i) b.emplace(m.vars()[i], kg.term(row[i]));
        out.push_back(std::move(b));
    }
    return out;
}

std::string display_text(const KnowledgeGraph& kg, const Term& t) {
    if (const auto* iri = std::get_if<Iri>(&t)) return kg.label(*iri);
    return std::get<Literal>(t).lexical();
}

std::vector<ConnectionInstance> discover_connections(const KnowledgeGraph& kg,
                                                     std::span<const PatternQuery> queries) {
    std::vector<ConnectionInstance> out;
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (const auto& q : queries) {
        for (const auto& b : match_pattern(kg, q)) {
            const auto* e1 = std::get_if<Iri>(&b.at(q.entity1_var));
            const auto* e2 = std::get_if<Iri>(&b.at(q.entity2_var));
            if (!e1 || !e2 || *e1 == *e2) continue;
            if (!seen.emplace(e1->value(), e2->value(), q.relationship_type).second) continue;

            std::map<std::string, std::string> labels;
            for (const auto& [var, value] : b) labels.emplace(var, display_text(kg, value));
            ConnectionInstance c{*e1, *e2, q.relationship_type, {}, fill_template(q.label_template, labels)};
            for (const auto& m : q.metadata_vars) c.metadata.emplace(m, canonical(b.at(m)));
            out.push_back(std::move(c));
        }
    }
    return out;
}

}  // namespace relex
