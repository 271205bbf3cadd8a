// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include <algorithm>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "relex/error.hpp"
#include "relex/kg.hpp"
#include "support.hpp"

namespace relex {
namespace {

KnowledgeGraph from_text(const std::string& text) {
    std::istringstream in(text);
    return load_ntriples(in);
}

// Line-by-line parser keyed on canonical statement text. Handles the subset
// used in these tests without the library's tokenizer.
std::set<std::string> naive_statements(const std::string& text) {
    std::set<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        auto last = line.find_last_of('.');
        std::string body = line.substr(first, last - first);
        while (!body.empty() && (body.back() == ' ' || body.back() == '\t')) body.pop_back();
        std::string norm;
        bool in_lit = false, ws = false;
        for (std::size_t i = 0; i < body.size(); ++i) {
            char c = body[i];
            if (c == '"' && (i == 0 || body[i - 1] != '\\')) in_lit = !in_lit;
            if (!in_lit && (c == ' ' || c == '\t')) {
                ws = true;
                continue;
            }
            if (ws) norm += ' ';
            ws = false;
            norm += c;
        }
        out.insert(norm + " .");
    }
    return out;
}

std::set<std::string> canonical_set(const KnowledgeGraph& kg) {
    std::set<std::string> out;
    for (const auto& t : kg.triples()) out.insert(canonical(t));
    return out;
}

TEST(Iri, RejectsEmptyAndWhitespace) {
    EXPECT_THROW(Iri(""), Error);
    EXPECT_THROW(Iri("a b"), Error);
    EXPECT_THROW(Iri("a<b"), Error);
    EXPECT_THROW(Iri("a>b"), Error);
    EXPECT_NO_THROW(Iri("http://x/Q42"));
}

TEST(Iri, LocalName) {
    EXPECT_EQ(Iri("http://x/Q42").local_name(), "Q42");
    EXPECT_EQ(Iri("http://www.w3.org/2000/01/rdf-schema#label").local_name(), "label");
    EXPECT_EQ(Iri("urn:isbn:123").local_name(), "123");
    EXPECT_EQ(Iri("http://x/").local_name(), "http://x/");
}

TEST(Literal, LangAndDatatypeExclusive) {
    EXPECT_THROW(Literal("x", "en", Iri("http://dt")), Error);
    EXPECT_NO_THROW(Literal(""));
}

TEST(Canonical, Forms) {
    EXPECT_EQ(canonical(Term{Iri("http://a")}), "<http://a>");
    EXPECT_EQ(canonical(Term{Literal("x")}), "\"x\"");
    EXPECT_EQ(canonical(Term{Literal("x", "en")}), "\"x\"@en");
    EXPECT_EQ(canonical(Term{Literal("1", std::nullopt, Iri("http://dt"))}), "\"1\"^^<http://dt>");
    EXPECT_EQ(canonical(Term{Literal("a\"b\\c\nd\te")}), "\"a\\\"b\\\\c\\nd\\te\"");
}

TEST(NTriples, SingleLine) {
    auto kg = from_text("<a> <p> <b> .\n");
    EXPECT_EQ(kg.size(), 1u);
}

TEST(NTriples, DuplicateLinesCollapse) {
    auto kg = from_text("<a> <p> <b> .\n<a> <p> <b> .\n");
    EXPECT_EQ(kg.size(), 1u);
}

TEST(NTriples, LanguageTagDistinguishes) {
    std::string text = "<a> <p> \"x\"@en .\n<a> <p> \"x\"@fr .\n";
    auto kg = from_text(text);
    EXPECT_EQ(kg.size(), 2u);
    EXPECT_EQ(canonical_set(kg), naive_statements(text));
}

TEST(NTriples, CommentsBlankLinesAndWhitespace) {
    std::string text = "# header\n\n  <a>   <p>\t<b>  .  \n<a> <p> \"x y\"^^<http://dt> .\n\t\n";
    auto kg = from_text(text);
    EXPECT_EQ(kg.size(), 2u);
    EXPECT_EQ(canonical_set(kg), naive_statements(text));
}

TEST(NTriples, LangTagLowercased) {
    auto kg = from_text("<a> <p> \"x\"@EN-gb .\n");
    auto t = kg.triples().at(0);
    EXPECT_EQ(std::get<Literal>(t.object).lang(), "en-gb");
}

TEST(NTriples, ErrorsCarryLineAndToken) {
    struct Case {
        std::string text;
        std::size_t line;
        std::string token;
    };
    std::vector<Case> cases{
        {"<a> <p> <b> .\n<a> <p> <b>\n", 2, "<end of line>"},
        {"\n\n_:b <p> <c> .\n", 3, "_:b"},
        {"<a> <p> \"open .\n", 1, "<end of line>"},
        {"<a> p <b> .\n", 1, "p"},
        {"<a> <p> <b> . extra\n", 1, "extra"},
        {"<a> <p> \"x\"@ .\n", 1, "@"},
        {"<a> <p> \"\\q\" .\n", 1, "\\q\""},
    };
    for (const auto& c : cases) {
        try {
            from_text(c.text);
            ADD_FAILURE() << "no error for " << c.text;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.line(), c.line) << c.text;
            EXPECT_EQ(e.token(), c.token) << c.text;
        }
    }
}

TEST(NTriples, ParseTerm) {
    EXPECT_EQ(parse_term("<http://a>"), Term{Iri("http://a")});
    EXPECT_EQ(parse_term("\"Leiden\"@en"), Term{Literal("Leiden", "en")});
    EXPECT_THROW(parse_term("<http://a> x"), ParseError);
}

TEST(NTriples, RoundTripFixtureAndRandom) {
    auto kg = load_ntriples_file(test::fixture("graph.nt"));
    std::ostringstream out;
    EXPECT_EQ(write_ntriples(kg.triples(), out), kg.size());
    auto again = from_text(out.str());
    EXPECT_EQ(again.triples(), kg.triples());

    std::mt19937_64 rng(7);
    for (int round = 0; round < 20; ++round) {
        auto triples = test::random_triples(rng, 10, 30, 3, 5);
        triples.push_back({test::node(1), test::pred(0), Term{Literal("quote \" back \\ nl \n tab \t", "nl")}});
        KnowledgeGraph g(triples);
        std::ostringstream o;
        write_ntriples(g.triples(), o);
        EXPECT_EQ(from_text(o.str()).triples(), g.triples());
    }
}

TEST(NTriples, EmptyExport) {
    std::ostringstream out;
    EXPECT_EQ(write_ntriples({}, out), 0u);
    EXPECT_EQ(out.str(), "");
}

TEST(Lookup, MatchesLinearScanForEveryMask) {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 30; ++round) {
        auto raw = test::random_triples(rng, 8, 40, 3, 6);
        KnowledgeGraph kg(raw);
        std::set<std::string> distinct;
        for (const auto& t : raw) distinct.insert(canonical(t));
        ASSERT_EQ(kg.size(), distinct.size());

        std::vector<Term> objects;
        for (const auto& t : raw) objects.push_back(t.object);
        objects.push_back(Term{Iri("http://example.org/absent")});
        for (int mask = 0; mask < 8; ++mask) {
            for (int trial = 0; trial < 6; ++trial) {
                const auto& pick = raw[std::uniform_int_distribution<std::size_t>(0, raw.size() - 1)(rng)];
                std::optional<Iri> s, p;
                std::optional<Term> o;
                if (mask & 1) s = pick.subject;
                if (mask & 2) p = pick.predicate;
                if (mask & 4) o = objects[std::uniform_int_distribution<std::size_t>(0, objects.size() - 1)(rng)];

                std::set<std::string> expect;
                for (const auto& t : raw)
                    if ((!s || t.subject == *s) && (!p || t.predicate == *p) && (!o || t.object == *o))
                        expect.insert(canonical(t));
                auto got = kg.lookup(s, p, o);
                std::vector<std::string> got_text;
                for (const auto& t : got) got_text.push_back(canonical(t));
                EXPECT_TRUE(std::is_sorted(got_text.begin(), got_text.end()));
                EXPECT_EQ(std::set<std::string>(got_text.begin(), got_text.end()), expect);
                EXPECT_EQ(got_text.size(), expect.size());
            }
        }
    }
}

TEST(Lookup, EmptyGraphAndUnbound) {
    KnowledgeGraph empty;
    EXPECT_TRUE(empty.lookup(std::nullopt, std::nullopt, std::nullopt).empty());
    auto kg = load_ntriples_file(test::fixture("graph.nt"));
    EXPECT_EQ(kg.lookup(std::nullopt, std::nullopt, std::nullopt).size(), kg.size());
}

TEST(Neighbors, Basic) {
    auto kg = from_text("<a> <p> <b> .\n<c> <q> <a> .\n<a> <p> \"lit\" .\n<z> <p> <y> .\n");
    auto out = kg.neighbors(Iri("a"), NeighborMode::Out);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0], (Neighbor{Iri("b"), Iri("p"), Direction::Out}));
    EXPECT_TRUE(kg.neighbors(Iri("isolated"), NeighborMode::Both).empty());
}

TEST(Neighbors, BothIsOutPlusInOnFixture) {
    auto kg = load_ntriples_file(test::fixture("graph.nt"));
    for (const auto& t : kg.triples()) {
        for (const auto& e : {t.subject}) {
            std::size_t out = 0, in = 0;
            for (const auto& u : kg.triples()) {
                if (!is_iri(u.object)) continue;
                if (u.subject == e) ++out;
                if (std::get<Iri>(u.object) == e) ++in;
            }
            EXPECT_EQ(kg.neighbors(e, NeighborMode::Out).size(), out);
            EXPECT_EQ(kg.neighbors(e, NeighborMode::In).size(), in);
            EXPECT_EQ(kg.neighbors(e, NeighborMode::Both).size(), out + in);
        }
    }
}

TEST(Labels, PreferenceAndFallback) {
    auto kg = from_text(
        "<http://x/a> <http://www.w3.org/2000/01/rdf-schema#label> \"Amsterdam\"@nl .\n"
        "<http://x/a> <http://www.w3.org/2000/01/rdf-schema#label> \"Amsterdam (en)\"@en .\n"
        "<http://x/b> <http://www.w3.org/2000/01/rdf-schema#label> \"plain\" .\n"
        "<http://x/b> <http://www.w3.org/2000/01/rdf-schema#label> \"Ander\"@de .\n"
        "<http://x/c> <http://x/p> <http://x/Q42> .\n");
    EXPECT_EQ(kg.label(Iri("http://x/a")), "Amsterdam (en)");
    EXPECT_EQ(kg.label(Iri("http://x/b")), "plain");
    EXPECT_EQ(kg.label(Iri("http://x/Q42")), "Q42");
    EXPECT_FALSE(kg.explicit_label(Iri("http://x/Q42")));
}

TEST(Describe, FixturePainter) {
    auto kg = load_ntriples_file(test::fixture("graph.nt"));
    auto d = kg.describe(Iri("http://www.wikidata.org/entity/Q5582"));
    EXPECT_EQ(d.label, "Vincent van Gogh");
    // P31 human, then P106 painter.
    EXPECT_EQ(d.description, "Vincent van Gogh (human, painter)");
    auto bare = kg.describe(Iri("http://x/Q42"));
    EXPECT_EQ(bare.label, "Q42");
    EXPECT_EQ(bare.description, "Q42");
}

TEST(Describe, MaxFacts) {
    GraphOptions opts;
    opts.max_facts = 1;
    auto kg = load_ntriples_file(test::fixture("graph.nt"), opts);
    EXPECT_EQ(kg.describe(Iri("http://www.wikidata.org/entity/Q5582")).description, "Vincent van Gogh (human)");
}

}  // namespace
}  // namespace relex
