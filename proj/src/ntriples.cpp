// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "relex/error.hpp"
#include "relex/kg.hpp"

namespace relex {

namespace {

class LineParser {
public:
    LineParser(std::string_view line, std::size_t lineno) : line_(line), lineno_(lineno) {}

    Term parse_single_term() {
        skip_ws();
        Term t = parse_object();
        skip_ws();
        if (pos_ != line_.size()) fail("trailing content after term");
        return t;
    }

    Triple parse() {
        skip_ws();
        Iri s = parse_iri("subject");
        skip_ws();
        Iri p = parse_iri("predicate");
        skip_ws();
        Term o = parse_object();
        skip_ws();
        if (pos_ >= line_.size() || line_[pos_] != '.') fail("expected '.'");
        ++pos_;
        skip_ws();
        if (pos_ < line_.size() && line_[pos_] != '#') fail("trailing content after '.'");
        return Triple{std::move(s), std::move(p), std::move(o)};
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        std::size_t end = pos_;
        while (end < line_.size() && line_[end] != ' ' && line_[end] != '\t') ++end;
        std::string token(line_.substr(std::min(pos_, line_.size()), end - std::min(pos_, line_.size())));
        if (token.empty()) token = "<end of line>";
        throw ParseError(what, lineno_, pos_ + 1, token);
    }

    void skip_ws() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' || line_[pos_] == '\r'))
            ++pos_;
    }

    Iri parse_iri(const char* role) {
        if (pos_ < line_.size() && line_[pos_] == '_') fail("blank nodes are not supported");
        if (pos_ >= line_.size() || line_[pos_] != '<') fail(std::string("expected IRI as ") + role);
        auto close = line_.find('>', pos_ + 1);
        if (close == std::string_view::npos) fail("unterminated IRI");
        std::string value(line_.substr(pos_ + 1, close - pos_ - 1));
        if (value.empty() || value.find_first_of(" \t<") != std::string::npos) fail("invalid IRI");
        pos_ = close + 1;
        return Iri(std::move(value));
    }

    Term parse_object() {
        if (pos_ < line_.size() && line_[pos_] == '"') return parse_literal();
        return parse_iri("object");
    }

    Literal parse_literal() {
        ++pos_;
        std::string lexical;
        bool closed = false;
        while (pos_ < line_.size()) {
            char c = line_[pos_];
            if (c == '"') {
                closed = true;
                ++pos_;
                break;
            }
            if (c == '\\') {
                if (pos_ + 1 >= line_.size()) fail("dangling escape");
                char e = line_[pos_ + 1];
                switch (e) {
                case '"': lexical += '"'; break;
                case '\\': lexical += '\\'; break;
                case 'n': lexical += '\n'; break;
                case 't': lexical += '\t'; break;
                default: fail("unsupported escape");
                }
                pos_ += 2;
                continue;
            }
            lexical += c;
            ++pos_;
        }
        if (!closed) fail("unterminated literal");
        if (pos_ < line_.size() && line_[pos_] == '@') {
            std::size_t start = ++pos_;
            while (pos_ < line_.size() &&
                   (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '-'))
                ++pos_;
            std::string tag(line_.substr(start, pos_ - start));
            if (tag.empty() || !std::isalpha(static_cast<unsigned char>(tag.front())) || tag.back() == '-') {
                pos_ = start - 1;
                fail("invalid language tag");
            }
            std::transform(tag.begin(), tag.end(), tag.begin(),
                           [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
            return Literal(std::move(lexical), std::move(tag));
        }
        if (line_.substr(pos_, 2) == "^^") {
            pos_ += 2;
            return Literal(std::move(lexical), std::nullopt, parse_iri("datatype"));
        }
        return Literal(std::move(lexical));
    }

    std::string_view line_;
    std::size_t lineno_;
    std::size_t pos_ = 0;
};

bool is_blank_or_comment(std::string_view line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

}  // namespace

std::vector<Triple> parse_ntriples(std::istream& in) {
    std::vector<Triple> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank_or_comment(line)) continue;
        out.push_back(LineParser(line, lineno).parse());
    }
    return out;
}

Term parse_term(std::string_view text) { return LineParser(text, 1).parse_single_term(); }

KnowledgeGraph load_ntriples(std::istream& in, GraphOptions options) {
    return KnowledgeGraph(parse_ntriples(in), std::move(options));
}

KnowledgeGraph load_ntriples_file(const std::string& path, GraphOptions options) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open graph file: " + path);
    return load_ntriples(in, std::move(options));
}

std::size_t write_ntriples(std::span<const Triple> triples, std::ostream& out) {
    std::set<std::string> lines;
    for (const auto& t : triples) lines.insert(canonical(t));
    for (const auto& l : lines) out << l << '\n';
    if (!out) throw Error("failed writing N-Triples output");
    return lines.size();
}

}  // namespace relex
