// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relex/baselines.hpp"
#include "relex/embedding.hpp"
#include "relex/evalkit.hpp"
#include "relex/explainer.hpp"
#include "relex/generation.hpp"
#include "relex/ingest.hpp"
#include "relex/paths.hpp"
#include "relex/relevance.hpp"

namespace relex {

inline constexpr const char* kDefaultQuerySet = "default";

struct EmbeddingConfig {
    std::string backend = "local";  // local | remote
    HttpEndpoint endpoint;
    std::size_t dim = HashingEmbedder::kDefaultDim;
    std::ptrdiff_t max_in_flight = 4;
};

struct GenerationConfig {
    std::string backend = "stub";  // stub | remote
    HttpEndpoint endpoint;
    int max_tokens = 256;
    std::ptrdiff_t max_in_flight = 2;
};

struct EvaluationConfig {
    UserContext context;
    std::optional<double> alpha;
    std::size_t k = 10;
};

struct EngineConfig {
    std::string graph_path;
    std::map<std::string, std::string> query_sets;  // name -> DSL file
    std::string templates_path;
    std::string gold_path;
    std::string ratings_path;
    std::string presets_dir;

    double alpha = kDefaultAlpha;
    std::size_t k = 10;
    PathLimits limits;
    GraphOptions graph_options;

    EmbeddingConfig embedding;
    GenerationConfig generation;
    std::vector<FewShotExample> few_shot;
    EvaluationConfig evaluation;

    HttpEndpoint sparql{"https://query.wikidata.org/sparql", "", 60000, "relex/0.1"};

    std::string host = "127.0.0.1";
    int port = 8080;

    // Throws DomainError on out-of-range values.
    void validate() const;
};

// Relative paths are resolved against `base_dir`.
EngineConfig parse_engine_config(const nlohmann::json& doc, const std::string& base_dir);
EngineConfig load_engine_config(const std::string& path);

// RELEX_EMBED_URL, RELEX_GENERATE_URL, RELEX_API_TOKEN and RELEX_SPARQL_URL.
void apply_env_overrides(EngineConfig& cfg);

struct Facets {
    std::set<std::string> relationship_types;  // empty = any
    std::optional<double> min_score;
    std::optional<double> max_score;

    bool admits(const ScoredExplanation& item) const;
};

struct ExploreRequest {
    std::optional<Iri> entity1;
    std::optional<Iri> entity2;
    UserContext context;
    std::optional<double> alpha;
    std::size_t k = 10;
    std::string query_set = kDefaultQuerySet;
    Facets facets;
};

struct ExploreResult {
    double alpha = kDefaultAlpha;
    std::size_t candidates = 0;
    RankedExplanations ranked;
    std::map<std::string, std::string> labels;  // IRI -> label for every returned entity
};

enum class SystemKind { Full, Graph, Knowledge };
SystemKind parse_system_kind(const std::string& s);
std::string system_kind_name(SystemKind k);

struct EntityHit {
    Iri iri;
    std::string label;
};

struct FacetCount {
    std::string relationship_type;
    std::size_t count;
};

struct GraphStats {
    std::size_t triples = 0;
    std::size_t entities = 0;
};

// Immutable view of everything derived from one graph.
struct Snapshot {
    std::shared_ptr<const KnowledgeGraph> kg;
    std::unique_ptr<EntityGraph> graph;
    std::map<std::string, std::vector<PatternQuery>> query_sets;
    std::map<std::string, std::vector<ConnectionInstance>> connections;
    TemplateSet templates;

    const std::vector<ConnectionInstance>& candidates(const std::string& query_set) const;
    const std::vector<PatternQuery>& queries(const std::string& query_set) const;
};

std::shared_ptr<const Snapshot> build_snapshot(KnowledgeGraph kg, const EngineConfig& cfg);

class Engine {
public:
    explicit Engine(EngineConfig cfg);
    Engine(EngineConfig cfg, KnowledgeGraph kg);

    const EngineConfig& config() const noexcept { return cfg_; }
    std::shared_ptr<const Snapshot> snapshot() const;

    // Replaces the graph; requests already running keep the old snapshot.
    GraphStats replace_graph(KnowledgeGraph kg);
    GraphStats stats() const;

    std::vector<ConnectionInstance> discover(const std::string& query_set) const;
    ExploreResult explore(const ExploreRequest& req) const;
    std::vector<EntityHit> search_entities(const std::string& q, std::size_t limit) const;
    std::vector<FacetCount> facets(const std::string& query_set) const;

    std::optional<BaselineResult> graph_baseline(const Iri& e1, const Iri& e2) const;
    std::vector<BaselineResult> knowledge_baseline(const std::string& query_set) const;

    // Outputs a system produces over the evaluation context.
    std::vector<SystemOutput> system_outputs(SystemKind kind) const;
    // Interestingness of each rated connection under the evaluation context.
    std::vector<ScorePair> rating_pairs(std::span<const RelevanceRating> ratings) const;

    MetricsReport evaluate(SystemKind kind, const std::string& gold_path) const;

    const EmbeddingBackend& embedder() const { return *embedder_; }
    const GenerationBackend& generator() const { return *generator_; }

private:
    EngineConfig cfg_;
    std::unique_ptr<EmbeddingBackend> base_embedder_;
    std::unique_ptr<EmbeddingBackend> embedder_;
    std::unique_ptr<GenerationBackend> generator_;
    mutable std::mutex mu_;
    std::shared_ptr<const Snapshot> snap_;
};

// --- JSON wire format ---

nlohmann::json to_json(const ConnectionInstance& c);
nlohmann::json to_json(const InterestingnessBreakdown& b);
nlohmann::json to_json(const ScoredExplanation& e);
nlohmann::json to_json(const ExploreResult& r);
nlohmann::json to_json(const MetricsReport& r);
nlohmann::json to_json(const BaselineResult& r);
nlohmann::json to_json(const Path& p);

UserContext user_context_from_json(const nlohmann::json& j);
// Throws DomainError on invalid fields.
ExploreRequest explore_request_from_json(const nlohmann::json& j);

// Accepts `<iri>` or a bare IRI.
Iri iri_from_text(const std::string& text);

}  // namespace relex
