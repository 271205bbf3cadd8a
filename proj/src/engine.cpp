// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "relex/error.hpp"

namespace relex {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve(const std::string& base_dir, const std::string& p) {
    if (p.empty()) return p;
    fs::path path(p);
    if (path.is_absolute()) return p;
    return (fs::path(base_dir) / path).lexically_normal().string();
}

HttpEndpoint endpoint_from_json(const json& j, HttpEndpoint ep) {
    ep.url = j.value("url", ep.url);
    ep.timeout_ms = j.value("timeout_ms", ep.timeout_ms);
    ep.user_agent = j.value("user_agent", ep.user_agent);
    if (j.contains("token_env")) {
        if (const char* v = std::getenv(j["token_env"].get<std::string>().c_str())) ep.token = v;
    }
    return ep;
}

std::vector<std::string> string_list(const json& j) {
    if (j.is_string()) return {j.get<std::string>()};
    return j.get<std::vector<std::string>>();
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

void EngineConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
    if (evaluation.alpha && !(*evaluation.alpha >= 0.0 && *evaluation.alpha <= 1.0))
        throw DomainError("evaluation alpha must lie in [0, 1]");
    limits.validate();
    if (embedding.backend != "local" && embedding.backend != "remote")
        throw DomainError("embedding backend must be 'local' or 'remote'");
    if (generation.backend != "stub" && generation.backend != "remote")
        throw DomainError("generation backend must be 'stub' or 'remote'");
    if (embedding.dim == 0) throw DomainError("embedding dim must be positive");
    if (embedding.max_in_flight < 1 || generation.max_in_flight < 1)
        throw DomainError("max_in_flight must be positive");
    if (port < 0 || port > 65535) throw DomainError("port out of range");
}

EngineConfig parse_engine_config(const json& doc, const std::string& base_dir) {
    EngineConfig c;
    try {
        c.graph_path = resolve(base_dir, doc.value("graph", ""));
        if (doc.contains("queries")) c.query_sets[kDefaultQuerySet] = resolve(base_dir, doc["queries"]);
        if (doc.contains("query_sets"))
            for (const auto& [name, path] : doc["query_sets"].items())
                c.query_sets[name] = resolve(base_dir, path.get<std::string>());
        c.templates_path = resolve(base_dir, doc.value("templates", ""));
        c.gold_path = resolve(base_dir, doc.value("gold", ""));
        c.ratings_path = resolve(base_dir, doc.value("ratings", ""));
        c.presets_dir = resolve(base_dir, doc.value("presets", ""));
        c.alpha = doc.value("alpha", c.alpha);
        c.k = doc.value("k", c.k);
        if (doc.contains("paths")) {
            const auto& p = doc["paths"];
            c.limits.max_depth = p.value("max_depth", c.limits.max_depth);
            c.limits.max_paths = p.value("max_paths", c.limits.max_paths);
            c.limits.directed = p.value("directed", c.limits.directed);
        }
        c.graph_options.label_predicate = doc.value("label_predicate", c.graph_options.label_predicate);
        c.graph_options.preferred_lang = doc.value("preferred_lang", c.graph_options.preferred_lang);
        if (doc.contains("fact_predicates"))
            c.graph_options.fact_predicates = doc["fact_predicates"].get<std::vector<std::string>>();
        if (doc.contains("embedding")) {
            const auto& e = doc["embedding"];
            c.embedding.backend = e.value("backend", c.embedding.backend);
            c.embedding.endpoint = endpoint_from_json(e, c.embedding.endpoint);
            c.embedding.dim = e.value("dim", c.embedding.dim);
            c.embedding.max_in_flight = e.value("max_in_flight", c.embedding.max_in_flight);
        }
        if (doc.contains("generation")) {
            const auto& g = doc["generation"];
            c.generation.backend = g.value("backend", c.generation.backend);
            c.generation.endpoint = endpoint_from_json(g, c.generation.endpoint);
            c.generation.max_tokens = g.value("max_tokens", c.generation.max_tokens);
            c.generation.max_in_flight = g.value("max_in_flight", c.generation.max_in_flight);
        }
        if (doc.contains("few_shot"))
            for (const auto& ex : doc["few_shot"])
                c.few_shot.push_back({ex.at("prompt").get<std::string>(), ex.at("response").get<std::string>()});
        if (doc.contains("evaluation")) {
            const auto& ev = doc["evaluation"];
            if (ev.contains("context")) c.evaluation.context = user_context_from_json(ev["context"]);
            if (ev.contains("alpha")) c.evaluation.alpha = ev["alpha"].get<double>();
            c.evaluation.k = ev.value("k", c.evaluation.k);
        }
        if (doc.contains("sparql")) c.sparql = endpoint_from_json(doc["sparql"], c.sparql);
        if (doc.contains("server")) {
            c.host = doc["server"].value("host", c.host);
            c.port = doc["server"].value("port", c.port);
        }
    } catch (const json::exception& e) {
        throw Error(std::string("invalid config: ") + e.what());
    }
    c.validate();
    return c;
}

EngineConfig load_engine_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error("invalid config " + path + ": " + e.what());
    }
    return parse_engine_config(doc, fs::path(path).parent_path().string());
}

void apply_env_overrides(EngineConfig& cfg) {
    if (const char* v = std::getenv("RELEX_EMBED_URL"); v && *v) {
        cfg.embedding.backend = "remote";
        cfg.embedding.endpoint.url = v;
    }
    if (const char* v = std::getenv("RELEX_GENERATE_URL"); v && *v) {
        cfg.generation.backend = "remote";
        cfg.generation.endpoint.url = v;
    }
    if (const char* v = std::getenv("RELEX_API_TOKEN"); v && *v) {
        cfg.embedding.endpoint.token = v;
        cfg.generation.endpoint.token = v;
    }
    if (const char* v = std::getenv("RELEX_SPARQL_URL"); v && *v) cfg.sparql.url = v;
}

bool Facets::admits(const ScoredExplanation& item) const {
    if (!relationship_types.empty() && !relationship_types.count(item.connection.relationship_type)) return false;
    if (min_score && item.breakdown.score < *min_score) return false;
    if (max_score && item.breakdown.score > *max_score) return false;
    return true;
}

SystemKind parse_system_kind(const std::string& s) {
    if (s == "full") return SystemKind::Full;
    if (s == "graph") return SystemKind::Graph;
    if (s == "knowledge") return SystemKind::Knowledge;
    throw DomainError("unknown system '" + s + "' (expected full, graph or knowledge)");
}

std::string system_kind_name(SystemKind k) {
    switch (k) {
    case SystemKind::Full: return "full";
    case SystemKind::Graph: return "graph";
    case SystemKind::Knowledge: return "knowledge";
    }
    return "full";
}

const std::vector<ConnectionInstance>& Snapshot::candidates(const std::string& query_set) const {
    auto it = connections.find(query_set);
    if (it == connections.end()) throw DomainError("unknown query set '" + query_set + "'");
    return it->second;
}

const std::vector<PatternQuery>& Snapshot::queries(const std::string& query_set) const {
    auto it = query_sets.find(query_set);
    if (it == query_sets.end()) throw DomainError("unknown query set '" + query_set + "'");
    return it->second;
}

std::shared_ptr<const Snapshot> build_snapshot(KnowledgeGraph kg, const EngineConfig& cfg) {
    auto s = std::make_shared<Snapshot>();
    s->kg = std::make_shared<const KnowledgeGraph>(std::move(kg));
    s->graph = std::make_unique<EntityGraph>(*s->kg, cfg.limits.directed);
    for (const auto& [name, path] : cfg.query_sets) {
        auto qs = load_query_set_file(path);
        s->connections[name] = discover_connections(*s->kg, qs);
        s->query_sets[name] = std::move(qs);
    }
    if (!cfg.templates_path.empty()) s->templates = load_templates_file(cfg.templates_path);
    return s;
}

namespace {

KnowledgeGraph load_configured_graph(const EngineConfig& cfg) {
    if (cfg.graph_path.empty()) return KnowledgeGraph({}, cfg.graph_options);
    return load_ntriples_file(cfg.graph_path, cfg.graph_options);
}

}  // namespace

Engine::Engine(EngineConfig cfg) : Engine(cfg, load_configured_graph(cfg)) {}

Engine::Engine(EngineConfig cfg, KnowledgeGraph kg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    if (cfg_.embedding.backend == "remote")
        base_embedder_ = std::make_unique<RemoteEmbedder>(cfg_.embedding.endpoint, cfg_.embedding.dim,
                                                          cfg_.embedding.max_in_flight);
    else
        base_embedder_ = std::make_unique<HashingEmbedder>(cfg_.embedding.dim);
    embedder_ = std::make_unique<MemoEmbedder>(*base_embedder_);
    if (cfg_.generation.backend == "remote")
        generator_ = std::make_unique<RemoteGenerator>(RemoteGenerationConfig{
            cfg_.generation.endpoint, cfg_.generation.max_tokens, cfg_.few_shot, cfg_.generation.max_in_flight});
    else
        generator_ = std::make_unique<StubGenerator>();
    snap_ = build_snapshot(std::move(kg), cfg_);
}

std::shared_ptr<const Snapshot> Engine::snapshot() const {
    std::lock_guard lock(mu_);
    return snap_;
}

GraphStats Engine::replace_graph(KnowledgeGraph kg) {
    auto next = build_snapshot(std::move(kg), cfg_);
    GraphStats st{next->kg->size(), next->kg->entity_count()};
    std::lock_guard lock(mu_);
    snap_ = std::move(next);
    return st;
}

GraphStats Engine::stats() const {
    auto s = snapshot();
    return {s->kg->size(), s->kg->entity_count()};
}

std::vector<ConnectionInstance> Engine::discover(const std::string& query_set) const {
    return snapshot()->candidates(query_set);
}

ExploreResult Engine::explore(const ExploreRequest& req) const {
    auto snap = snapshot();
    const auto& all = snap->candidates(req.query_set);
    std::vector<ConnectionInstance> cands;
    for (const auto& c : all) {
        if (req.entity1 && req.entity2) {
            bool fwd = c.entity1 == *req.entity1 && c.entity2 == *req.entity2;
            bool rev = c.entity1 == *req.entity2 && c.entity2 == *req.entity1;
            if (!fwd && !rev) continue;
        } else if (req.entity1 || req.entity2) {
            const auto& e = req.entity1 ? *req.entity1 : *req.entity2;
            if (c.entity1 != e && c.entity2 != e) continue;
        }
        cands.push_back(c);
    }

    ExploreResult r;
    r.alpha = resolve_alpha(req.alpha, req.context, cfg_.alpha);
    r.candidates = cands.size();
    r.ranked = rank_and_explain(*snap->graph, cands, req.context, req.k, Backends{*embedder_, *generator_},
                                cfg_.limits, r.alpha);
    std::erase_if(r.ranked.items, [&](const ScoredExplanation& it) { return !req.facets.admits(it); });
    for (const auto& it : r.ranked.items)
        for (const auto& e : {it.connection.entity1, it.connection.entity2})
            r.labels.emplace(e.value(), snap->kg->label(e));
    return r;
}

std::vector<EntityHit> Engine::search_entities(const std::string& q, std::size_t limit) const {
    auto snap = snapshot();
    auto needle = lower(q);
    std::vector<EntityHit> out;
    for (const auto& e : snap->kg->labelled_entities()) {
        if (out.size() >= limit) break;
        auto label = snap->kg->label(e);
        if (lower(label).find(needle) != std::string::npos) out.push_back({e, std::move(label)});
    }
    return out;
}

std::vector<FacetCount> Engine::facets(const std::string& query_set) const {
    std::map<std::string, std::size_t> counts;
    for (const auto& c : snapshot()->candidates(query_set)) ++counts[c.relationship_type];
    std::vector<FacetCount> out;
    for (const auto& [t, n] : counts) out.push_back({t, n});
    return out;
}

std::optional<BaselineResult> Engine::graph_baseline(const Iri& e1, const Iri& e2) const {
    auto snap = snapshot();
    return relex::graph_baseline(*snap->graph, e1, e2);
}

std::vector<BaselineResult> Engine::knowledge_baseline(const std::string& query_set) const {
    auto snap = snapshot();
    return relex::knowledge_baseline(*snap->kg, snap->queries(query_set), snap->templates);
}

std::vector<SystemOutput> Engine::system_outputs(SystemKind kind) const {
    auto snap = snapshot();
    const auto& cands = snap->candidates(kDefaultQuerySet);
    std::vector<SystemOutput> out;
    switch (kind) {
    case SystemKind::Full: {
        double alpha = resolve_alpha(cfg_.evaluation.alpha, cfg_.evaluation.context, cfg_.alpha);
        auto ranked = rank_and_explain(*snap->graph, cands, cfg_.evaluation.context, cfg_.evaluation.k,
                                       Backends{*embedder_, *generator_}, cfg_.limits, alpha);
        for (auto& it : ranked.items) out.push_back({std::move(it.connection), std::move(it.explanation)});
        break;
    }
    case SystemKind::Graph: {
        std::set<std::pair<Iri, Iri>> pairs;
        for (const auto& c : cands) pairs.insert(std::minmax(c.entity1, c.entity2));
        for (const auto& [a, b] : pairs)
            if (auto r = relex::graph_baseline(*snap->graph, a, b)) out.push_back({r->connection, r->explanation});
        break;
    }
    case SystemKind::Knowledge:
        for (auto& r : relex::knowledge_baseline(*snap->kg, snap->queries(kDefaultQuerySet), snap->templates))
            out.push_back({std::move(r.connection), std::move(r.explanation)});
        break;
    }
    return out;
}

std::vector<ScorePair> Engine::rating_pairs(std::span<const RelevanceRating> ratings) const {
    auto snap = snapshot();
    const auto& cands = snap->candidates(kDefaultQuerySet);
    double alpha = resolve_alpha(cfg_.evaluation.alpha, cfg_.evaluation.context, cfg_.alpha);
    auto scored = score_candidates(*snap->graph, cands, cfg_.evaluation.context, *embedder_, cfg_.limits, alpha);
    std::map<GoldKey, double> by_key;
    for (const auto& s : scored) {
        if (s.error) continue;
        by_key.emplace(gold_key(s.connection.entity1, s.connection.entity2, s.connection.relationship_type),
                       s.breakdown.score);
    }
    std::vector<ScorePair> out;
    for (const auto& r : ratings) {
        auto it = by_key.find(r.key);
        if (it == by_key.end())
            throw Error("rated connection was not discovered: " + std::get<0>(r.key) + " " + std::get<1>(r.key) +
                        " " + std::get<2>(r.key));
        out.push_back({it->second, r.rating});
    }
    return out;
}

MetricsReport Engine::evaluate(SystemKind kind, const std::string& gold_path) const {
    const auto& path = gold_path.empty() ? cfg_.gold_path : gold_path;
    if (path.empty()) throw Error("no gold standard configured");
    auto gold = load_gold_standard_file(path);
    auto outputs = system_outputs(kind);
    std::vector<ScorePair> pairs;
    if (kind == SystemKind::Full && !cfg_.ratings_path.empty())
        pairs = rating_pairs(load_ratings_file(cfg_.ratings_path));
    return evaluate_system(outputs, gold, pairs);
}

// --- JSON ---

json to_json(const ConnectionInstance& c) {
    return json{{"entity1", c.entity1.value()},
                {"entity2", c.entity2.value()},
                {"relationship_type", c.relationship_type},
                {"metadata", c.metadata},
                {"explanation_text", c.explanation_text}};
}

json to_json(const InterestingnessBreakdown& b) {
    return json{{"sr", b.sr}, {"cr", b.cr}, {"alpha", b.alpha}, {"score", b.score}};
}

json to_json(const ScoredExplanation& e) {
    return json{{"connection", to_json(e.connection)},
                {"breakdown", to_json(e.breakdown)},
                {"explanation", e.explanation},
                {"backend", e.backend_id},
                {"warnings", e.warnings}};
}

json to_json(const ExploreResult& r) {
    json items = json::array();
    for (const auto& it : r.ranked.items) items.push_back(to_json(it));
    json failures = json::array();
    for (const auto& f : r.ranked.failures)
        failures.push_back({{"connection", to_json(f.connection)}, {"stage", f.stage}, {"message", f.message}});
    return json{{"alpha", r.alpha},
                {"candidates", r.candidates},
                {"items", items},
                {"failures", failures},
                {"labels", r.labels}};
}

json to_json(const MetricsReport& r) {
    return json{{"precision", r.precision},
                {"recall", r.recall},
                {"f1", r.f1},
                {"bleu", r.bleu},
                {"rouge_l", r.rouge_l},
                {"meteor", r.meteor},
                {"spearman", r.spearman ? json(*r.spearman) : json(nullptr)},
                {"diversity_distinct1", r.diversity_distinct1},
                {"diversity_distinct2", r.diversity_distinct2},
                {"diversity_type_count", r.diversity_type_count},
                {"retrieved", r.retrieved},
                {"text_scored", r.text_scored}};
}

json to_json(const Path& p) {
    json nodes = json::array();
    for (const auto& n : p.nodes) nodes.push_back(n.value());
    json edges = json::array();
    for (const auto& e : p.edges)
        edges.push_back({{"predicate", e.predicate.value()}, {"direction", e.direction == Direction::Out ? "out" : "in"}});
    return json{{"nodes", nodes}, {"edges", edges}, {"length", p.length()}};
}

json to_json(const BaselineResult& r) {
    json j{{"connection", to_json(r.connection)},
           {"explanation", r.explanation},
           {"method", r.method == BaselineMethod::Graph ? "graph" : "knowledge"}};
    j["path"] = r.path ? to_json(*r.path) : json(nullptr);
    return j;
}

UserContext user_context_from_json(const json& j) {
    UserContext u;
    if (j.is_string()) {
        if (!j.get<std::string>().empty()) u.interests.push_back(j.get<std::string>());
        return u;
    }
    try {
        if (j.contains("search_history")) u.search_history = string_list(j["search_history"]);
        u.expertise = j.value("expertise", "");
        if (j.contains("interests")) u.interests = string_list(j["interests"]);
        if (j.contains("alpha") && !j["alpha"].is_null()) u.alpha_override = j["alpha"].get<double>();
    } catch (const json::exception& e) {
        throw DomainError(std::string("invalid context: ") + e.what());
    }
    if (u.alpha_override && !(*u.alpha_override >= 0.0 && *u.alpha_override <= 1.0))
        throw DomainError("context alpha must lie in [0, 1]");
    return u;
}

Iri iri_from_text(const std::string& text) {
    if (text.size() >= 2 && text.front() == '<' && text.back() == '>') return Iri(text.substr(1, text.size() - 2));
    return Iri(text);
}

ExploreRequest explore_request_from_json(const json& j) {
    if (!j.is_object()) throw DomainError("explore request must be an object");
    ExploreRequest r;
    try {
        if (j.contains("entity1") && !j["entity1"].is_null()) r.entity1 = iri_from_text(j["entity1"]);
        if (j.contains("entity2") && !j["entity2"].is_null()) r.entity2 = iri_from_text(j["entity2"]);
        if (j.contains("context")) r.context = user_context_from_json(j["context"]);
        if (j.contains("alpha") && !j["alpha"].is_null()) r.alpha = j["alpha"].get<double>();
        if (j.contains("k")) {
            if (!j["k"].is_number_integer() || j["k"].get<long long>() < 0)
                throw DomainError("k must be a non-negative integer");
            r.k = j["k"].get<std::size_t>();
        }
        r.query_set = j.value("query_set", std::string(kDefaultQuerySet));
        if (j.contains("facets") && !j["facets"].is_null()) {
            const auto& f = j["facets"];
            if (f.contains("relationship_type"))
                for (auto& t : string_list(f["relationship_type"])) r.facets.relationship_types.insert(t);
            if (f.contains("min_score") && !f["min_score"].is_null()) r.facets.min_score = f["min_score"].get<double>();
            if (f.contains("max_score") && !f["max_score"].is_null()) r.facets.max_score = f["max_score"].get<double>();
        }
    } catch (const json::exception& e) {
        throw DomainError(std::string("invalid explore request: ") + e.what());
    }
    if (r.alpha && !(*r.alpha >= 0.0 && *r.alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
    return r;
}

}  // namespace relex
