// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "relex/engine.hpp"
#include "relex/error.hpp"
#include "relex/server.hpp"

namespace relex {

using nlohmann::json;

namespace {

struct Common {
    std::string config;
    std::string graph;
    std::string queries;
    std::string templates;
    std::string format = "text";
};

EngineConfig make_config(const Common& c) {
    EngineConfig cfg;
    std::string path = c.config;
    if (path.empty())
        if (const char* v = std::getenv("RELEX_CONFIG")) path = v;
    if (!path.empty()) cfg = load_engine_config(path);
    if (!c.graph.empty()) cfg.graph_path = c.graph;
    if (!c.queries.empty()) cfg.query_sets[kDefaultQuerySet] = c.queries;
    if (!c.templates.empty()) cfg.templates_path = c.templates;
    apply_env_overrides(cfg);
    return cfg;
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void add_common(CLI::App* sub, Common& c, bool graph_opts = true) {
    sub->add_option("--config", c.config, "engine config file (default: $RELEX_CONFIG)");
    if (graph_opts) {
        sub->add_option("--graph", c.graph, "N-Triples graph, overrides the config");
        sub->add_option("--queries", c.queries, "pattern query set, overrides the config");
        sub->add_option("--templates", c.templates, "explanation templates, overrides the config");
    }
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json"}));
}

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"relex: relational exploration over knowledge graphs", "relex"};
    app.require_subcommand(1);
    Common common;
    std::function<void()> action;

    // load
    std::string load_path;
    bool load_stats = false;
    auto* load = app.add_subcommand("load", "parse an N-Triples file");
    load->add_option("graph", load_path, "N-Triples file")->required();
    load->add_flag("--stats", load_stats, "print triple and entity counts");
    load->add_option("--format", common.format)->check(CLI::IsMember({"text", "json"}));
    load->callback([&] {
        action = [&] {
            auto kg = load_ntriples_file(load_path);
            if (common.format == "json") {
                print_json(out, {{"triples", kg.size()}, {"entities", kg.entity_count()}});
            } else if (load_stats) {
                out << "triples: " << kg.size() << "\nentities: " << kg.entity_count() << '\n';
            } else {
                out << "loaded " << kg.size() << " triples\n";
            }
        };
    });

    // discover
    std::string discover_set = kDefaultQuerySet;
    auto* discover = app.add_subcommand("discover", "list connection candidates");
    add_common(discover, common);
    discover->add_option("--query-set", discover_set, "query set name");
    discover->callback([&] {
        action = [&] {
            Engine engine(make_config(common));
            auto conns = engine.discover(discover_set);
            if (common.format == "json") {
                json list = json::array();
                for (const auto& c : conns) list.push_back(to_json(c));
                print_json(out, {{"connections", list}});
                return;
            }
            for (const auto& c : conns)
                out << c.relationship_type << '\t' << c.entity1.value() << '\t' << c.entity2.value() << '\t'
                    << c.explanation_text << '\n';
        };
    });

    // explore
    std::string e1, e2, expertise;
    std::vector<std::string> interests, history, type_facets;
    std::optional<double> alpha, min_score, max_score;
    std::optional<std::size_t> k;
    std::string explore_set = kDefaultQuerySet;
    auto* explore = app.add_subcommand("explore", "rank and explain connections");
    add_common(explore, common);
    explore->add_option("--e1", e1, "first entity IRI");
    explore->add_option("--e2", e2, "second entity IRI");
    explore->add_option("--context", interests, "user interests (repeatable)");
    explore->add_option("--history", history, "search history entries (repeatable)");
    explore->add_option("--expertise", expertise, "user expertise");
    explore->add_option("--alpha", alpha, "weight of semantic relatedness")->check(CLI::Range(0.0, 1.0));
    explore->add_option("--k", k, "number of results");
    explore->add_option("--query-set", explore_set, "query set name");
    explore->add_option("--type", type_facets, "keep only these relationship types");
    explore->add_option("--min-score", min_score, "drop items scoring below");
    explore->add_option("--max-score", max_score, "drop items scoring above");
    explore->callback([&] {
        action = [&] {
            Engine engine(make_config(common));
            ExploreRequest req;
            if (!e1.empty()) req.entity1 = iri_from_text(e1);
            if (!e2.empty()) req.entity2 = iri_from_text(e2);
            req.context.interests = interests;
            req.context.search_history = history;
            req.context.expertise = expertise;
            req.alpha = alpha;
            req.k = k.value_or(engine.config().k);
            req.query_set = explore_set;
            req.facets.relationship_types.insert(type_facets.begin(), type_facets.end());
            req.facets.min_score = min_score;
            req.facets.max_score = max_score;
            auto r = engine.explore(req);
            if (common.format == "json") {
                print_json(out, to_json(r));
                return;
            }
            out << "alpha " << fmt4(r.alpha) << ", " << r.candidates << " candidates\n";
            std::size_t rank = 0;
            for (const auto& it : r.ranked.items) {
                const auto& c = it.connection;
                out << ++rank << ". " << fmt4(it.breakdown.score) << "  sr " << fmt4(it.breakdown.sr) << "  cr "
                    << fmt4(it.breakdown.cr) << "  " << c.relationship_type << "  " << r.labels.at(c.entity1.value())
                    << " -> " << r.labels.at(c.entity2.value()) << '\n';
                out << "   " << it.explanation << '\n';
                for (const auto& w : it.warnings) out << "   warning: " << w << '\n';
            }
            for (const auto& f : r.ranked.failures)
                out << "failed (" << f.stage << "): " << f.connection.entity1.value() << " "
                    << f.connection.entity2.value() << ": " << f.message << '\n';
        };
    });

    // baseline
    std::string method = "graph";
    std::string b_e1, b_e2;
    auto* baseline = app.add_subcommand("baseline", "graph or knowledge baseline explanations");
    add_common(baseline, common);
    baseline->add_option("--method", method)->check(CLI::IsMember({"graph", "knowledge"}));
    baseline->add_option("--e1", b_e1, "first entity IRI");
    baseline->add_option("--e2", b_e2, "second entity IRI");
    baseline->callback([&] {
        action = [&] {
            Engine engine(make_config(common));
            std::vector<BaselineResult> results;
            if (method == "graph") {
                if (b_e1.empty() || b_e2.empty()) throw CLI::ValidationError("--e1 and --e2 are required for graph");
                if (auto r = engine.graph_baseline(iri_from_text(b_e1), iri_from_text(b_e2))) results.push_back(*r);
            } else {
                for (auto& r : engine.knowledge_baseline(kDefaultQuerySet)) {
                    if (!b_e1.empty() && r.connection.entity1 != iri_from_text(b_e1) &&
                        r.connection.entity2 != iri_from_text(b_e1))
                        continue;
                    if (!b_e2.empty() && r.connection.entity1 != iri_from_text(b_e2) &&
                        r.connection.entity2 != iri_from_text(b_e2))
                        continue;
                    results.push_back(std::move(r));
                }
            }
            if (common.format == "json") {
                json list = json::array();
                for (const auto& r : results) list.push_back(to_json(r));
                print_json(out, {{"results", list}});
                return;
            }
            if (results.empty() && method == "graph") out << "no path\n";
            for (const auto& r : results) out << r.explanation << '\n';
        };
    });

    // evaluate
    std::string gold, system = "full", report_path;
    auto* evaluate = app.add_subcommand("evaluate", "score a system against a gold standard");
    add_common(evaluate, common);
    evaluate->add_option("--gold", gold, "gold standard file (default from config)");
    evaluate->add_option("--system", system)->check(CLI::IsMember({"full", "graph", "knowledge"}));
    evaluate->add_option("--report", report_path, "also write the report as JSON to this file");
    evaluate->callback([&] {
        action = [&] {
            Engine engine(make_config(common));
            auto report = engine.evaluate(parse_system_kind(system), gold);
            if (!report_path.empty()) {
                std::ofstream f(report_path);
                f << to_json(report).dump(2) << '\n';
                if (!f) throw Error("cannot write report: " + report_path);
            }
            if (common.format == "json") print_json(out, to_json(report));
            else out << "system: " << system << '\n' << format_report_text(report);
        };
    });

    // fetch
    std::string preset, query_file, mapping_file, endpoint, out_file, presets_dir;
    std::size_t page_size = 1000;
    std::optional<std::size_t> max_rows;
    auto* fetch = app.add_subcommand("fetch", "extract a graph subset from a remote query endpoint");
    fetch->add_option("--config", common.config, "engine config file (default: $RELEX_CONFIG)");
    fetch->add_option("--preset", preset, "preset name");
    fetch->add_option("--presets-dir", presets_dir, "directory holding <preset>.rq and <preset>.map");
    fetch->add_option("--query", query_file, "query text file");
    fetch->add_option("--mapping", mapping_file, "triple mapping file");
    fetch->add_option("--endpoint", endpoint, "query endpoint URL (default: $RELEX_SPARQL_URL or config)");
    fetch->add_option("--page-size", page_size, "rows per request; 0 disables paging");
    fetch->add_option("--max-rows", max_rows, "stop after this many rows");
    fetch->add_option("-o,--out", out_file, "write N-Triples here instead of stdout");
    fetch->callback([&] {
        if (preset.empty() == query_file.empty())
            throw CLI::ValidationError("fetch needs exactly one of --preset or --query");
        if (!query_file.empty() && mapping_file.empty()) throw CLI::ValidationError("--query needs --mapping");
        action = [&] {
            auto cfg = make_config(common);
            Preset p;
            if (!preset.empty()) {
                auto dir = presets_dir.empty() ? cfg.presets_dir : presets_dir;
                if (dir.empty()) dir = std::string(RELEX_DATA_DIR) + "/presets";
                p = load_preset(dir, preset);
            } else {
                std::ifstream q(query_file);
                if (!q) throw Error("cannot open query file: " + query_file);
                p.query.assign(std::istreambuf_iterator<char>(q), {});
                p.mapping = load_mapping_file(mapping_file);
            }
            FetchOptions opts{cfg.sparql, page_size, max_rows};
            if (!endpoint.empty()) opts.endpoint.url = endpoint;
            auto table = fetch_remote(opts, p.query);
            auto triples = table_to_triples(table, p.mapping);
            if (out_file.empty()) {
                export_ntriples(triples, out);
                return;
            }
            std::ofstream f(out_file);
            if (!f) throw Error("cannot write " + out_file);
            auto n = export_ntriples(triples, f);
            err << "fetched " << table.rows.size() << " rows, wrote " << n << " triples to " << out_file << '\n';
        };
    });

    // serve
    std::optional<std::string> host;
    std::optional<int> port;
    auto* serve = app.add_subcommand("serve", "run the HTTP service");
    add_common(serve, common);
    serve->add_option("--host", host, "bind address");
    serve->add_option("--port", port, "listen port")->check(CLI::Range(0, 65535));
    serve->callback([&] {
        action = [&] {
            Engine engine(make_config(common));
            Server server(engine);
            auto bound = server.bind(host.value_or(engine.config().host), port.value_or(engine.config().port));
            spdlog::info("listening on {}:{} ({} triples)", host.value_or(engine.config().host), bound,
                         engine.stats().triples);
            server.run();
        };
    });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        action();
        return kExitOk;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace relex
