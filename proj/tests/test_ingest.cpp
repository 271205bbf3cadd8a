// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include <atomic>
#include <sstream>

#include <gtest/gtest.h>

#include "relex/error.hpp"
#include "relex/ingest.hpp"
#include "support.hpp"

namespace relex {
namespace {

const std::string kWd = "http://www.wikidata.org/entity/";
const std::string kWdt = "http://www.wikidata.org/prop/direct/";
const std::string kLabel = "http://www.w3.org/2000/01/rdf-schema#label";

std::string sparql(const std::string& name) { return test::slurp(test::test_data("sparql/" + name)); }

BackendError::Kind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const BackendError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no BackendError";
    return BackendError::Kind::Network;
}

// Serves the three recorded pages by OFFSET and records every query.
struct PagedEndpoint {
    test::ReplayServer server;
    std::vector<std::string> queries;
    std::mutex mu;

    PagedEndpoint() {
        server.get("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
            auto q = req.get_param_value("query");
            {
                std::lock_guard lock(mu);
                queries.push_back(q);
            }
            auto at = q.rfind("OFFSET ");
            std::size_t offset = at == std::string::npos ? 0 : std::stoul(q.substr(at + 7));
            const char* page = offset == 0 ? "painters_page1.json"
                               : offset == 2 ? "painters_page2.json"
                               : offset == 4 ? "painters_page3.json"
                                             : "empty.json";
            res.set_content(sparql(page), "application/sparql-results+json");
        });
        server.start();
    }

    FetchOptions options(std::size_t page_size) {
        FetchOptions o;
        o.endpoint.url = server.url("/sparql");
        o.page_size = page_size;
        o.backoff_ms = 1;
        return o;
    }
};

TEST(SparqlJson, ParsesCellTypes) {
    auto t = parse_sparql_json(sparql("painters_full.json"));
    ASSERT_EQ(t.variables.size(), 8u);
    ASSERT_EQ(t.rows.size(), 5u);
    EXPECT_EQ(t.rows[0].at("painter"), Term{Iri(kWd + "Q5598")});
    EXPECT_EQ(t.rows[0].at("painterLabel"), Term{Literal("Rembrandt", "en")});
    EXPECT_EQ(t.rows[1].at("occupationLabel"), Term{Literal("schilder", "nl")});

    std::size_t unbound = 0;
    for (const auto& r : t.rows) unbound += t.variables.size() - r.size();
    // Fabritius lacks deathPlace and its label; one blank-node birth place.
    EXPECT_GE(unbound, 3u);

    auto typed = parse_sparql_json(R"({"head":{"vars":["x","y"]},"results":{"bindings":[
        {"x":{"type":"typed-literal","value":"1606","datatype":"http://www.w3.org/2001/XMLSchema#integer"},
         "y":{"type":"literal","value":"Hi","xml:lang":"EN"}}]}})");
    EXPECT_EQ(typed.rows[0].at("x"),
              Term{Literal("1606", std::nullopt, Iri("http://www.w3.org/2001/XMLSchema#integer"))});
    EXPECT_EQ(typed.rows[0].at("y"), Term{Literal("Hi", "en")});
}

TEST(SparqlJson, RejectsMalformed) {
    EXPECT_EQ(kind_of([] { parse_sparql_json(sparql("garbled.json")); }), BackendError::Kind::MalformedResponse);
    EXPECT_EQ(kind_of([] { parse_sparql_json(R"({"head":{}})"); }), BackendError::Kind::MalformedResponse);
    EXPECT_EQ(kind_of([] {
                  parse_sparql_json(R"({"head":{"vars":["x"]},"results":{"bindings":[
                      {"z":{"type":"uri","value":"http://a"}}]}})");
              }),
              BackendError::Kind::MalformedResponse);
    EXPECT_TRUE(parse_sparql_json(sparql("empty.json")).rows.empty());
}

TEST(Mapping, ParseRules) {
    auto m = parse_mapping("# c\n?p wdt:P19 ?b\n?p <http://x/q> wd:Q5\n?p rdfs:label \"x\"@en\n");
    ASSERT_EQ(m.rules.size(), 3u);
    EXPECT_EQ(m.rules[0].predicate, Iri(kWdt + "P19"));
    EXPECT_EQ(std::get<std::string>(m.rules[0].object), "b");
    EXPECT_EQ(std::get<Term>(m.rules[1].object), Term{Iri(kWd + "Q5")});
    EXPECT_EQ(std::get<Term>(m.rules[2].object), Term{Literal("x", "en")});

    auto where = [](const std::string& src) -> std::pair<std::size_t, std::size_t> {
        try {
            parse_mapping(src);
        } catch (const ParseError& e) {
            return {e.line(), e.column()};
        }
        return {0, 0};
    };
    EXPECT_EQ(where("?p wdt:P19 ?b\np wdt:P19 ?b\n").first, 2u);
    EXPECT_EQ(where("?p nope:P19 ?b\n").first, 1u);
    EXPECT_EQ(where("?p wdt:P19\n").first, 1u);
    EXPECT_EQ(load_mapping_file(test::fixture("../presets/painters.map")).rules.size(), 8u);
}

TEST(Mapping, TableToTriples) {
    auto t = parse_sparql_json(sparql("painters_full.json"));
    auto m = load_mapping_file(test::fixture("../presets/painters.map"));
    auto triples = table_to_triples(t, m);
    std::set<std::string> text;
    for (const auto& tr : triples) EXPECT_TRUE(text.insert(canonical(tr)).second) << "duplicate " << canonical(tr);
    EXPECT_TRUE(text.count("<" + kWd + "Q5598> <" + kWdt + "P19> <" + kWd + "Q43631> ."));
    EXPECT_TRUE(text.count("<" + kWd + "Q43631> <" + kLabel + "> \"Leiden\"@nl ."));
    EXPECT_TRUE(text.count("<" + kWd + "Q5598> <" + kWdt + "P106> <" + kWd + "Q1028181> ."));
    // Blank-node birth place is unbound: no P19 triple for that painter.
    for (const auto& tr : triples)
        if (tr.subject == Iri(kWd + "Q99999999")) EXPECT_NE(tr.predicate, Iri(kWdt + "P19"));

    TripleMapping bad{{{"nobody", Iri(kWdt + "P19"), std::string("birthPlace")}}};
    EXPECT_THROW(table_to_triples(t, bad), Error);
}

TEST(Mapping, ExportRoundTrip) {
    auto triples = table_to_triples(parse_sparql_json(sparql("painters_full.json")),
                                    load_mapping_file(test::fixture("../presets/painters.map")));
    std::ostringstream out;
    EXPECT_EQ(export_ntriples(triples, out), triples.size());
    std::istringstream in(out.str());
    EXPECT_EQ(load_ntriples(in).triples(), KnowledgeGraph(triples).triples());
}

TEST(Fetch, PagingMatchesSingleResponse) {
    PagedEndpoint ep;
    auto full = parse_sparql_json(sparql("painters_full.json"));
    auto paged = fetch_remote(ep.options(2), "SELECT * WHERE { ?s ?p ?o }");
    EXPECT_EQ(paged, full);
    ASSERT_EQ(ep.queries.size(), 3u);
    EXPECT_EQ(ep.queries[0], paged_query("SELECT * WHERE { ?s ?p ?o }", 2, 0));
    EXPECT_EQ(ep.queries[2], "SELECT * WHERE { ?s ?p ?o }\nLIMIT 2 OFFSET 4");
}

TEST(Fetch, MaxRowsAndSinglePage) {
    PagedEndpoint ep;
    auto opts = ep.options(2);
    opts.max_rows = 3;
    auto t = fetch_remote(opts, "Q");
    EXPECT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(ep.queries.back(), "Q\nLIMIT 1 OFFSET 2");

    ep.queries.clear();
    auto once = fetch_remote(ep.options(0), "Q");
    EXPECT_EQ(once.rows.size(), 2u);
    EXPECT_EQ(ep.queries, std::vector<std::string>{"Q"});
}

TEST(Fetch, RetriesTransientFailures) {
    test::ReplayServer server;
    std::atomic<int> calls{0};
    server.get("/flaky", [&](const httplib::Request&, httplib::Response& res) {
        if (++calls < 3) {
            res.status = calls == 1 ? 503 : 429;
            return;
        }
        res.set_content(sparql("painters_page3.json"), "application/sparql-results+json");
    });
    server.get("/denied", [&](const httplib::Request&, httplib::Response& res) {
        ++calls;
        res.status = 403;
    });
    server.get("/garbled", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content(sparql("garbled.json"), "application/json");
    });
    server.start();

    FetchOptions o;
    o.endpoint.url = server.url("/flaky");
    o.page_size = 0;
    o.backoff_ms = 1;
    EXPECT_EQ(fetch_remote(o, "Q").rows.size(), 1u);
    EXPECT_EQ(calls, 3);

    calls = 0;
    o.attempts = 2;
    EXPECT_EQ(kind_of([&] { fetch_remote(o, "Q"); }), BackendError::Kind::HttpStatus);
    EXPECT_EQ(calls, 2);

    calls = 0;
    o.endpoint.url = server.url("/denied");
    EXPECT_EQ(kind_of([&] { fetch_remote(o, "Q"); }), BackendError::Kind::Auth);
    EXPECT_EQ(calls, 1);

    o.endpoint.url = server.url("/garbled");
    EXPECT_EQ(kind_of([&] { fetch_remote(o, "Q"); }), BackendError::Kind::MalformedResponse);
}

TEST(Presets, ShippedPresetsLoad) {
    for (const auto& name : {"painters", "paintings", "museums", "places", "events"}) {
        auto p = load_preset(test::fixture("../presets"), name);
        EXPECT_EQ(p.name, name);
        EXPECT_NE(p.query.find("SELECT"), std::string::npos) << name;
        EXPECT_EQ(p.query.find("LIMIT"), std::string::npos) << name;
        EXPECT_FALSE(p.mapping.rules.empty()) << name;
    }
    EXPECT_THROW(load_preset(test::fixture("../presets"), "nothing"), Error);
}

}  // namespace
}  // namespace relex
