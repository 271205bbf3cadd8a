// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "relex/dsl.hpp"

namespace relex {

using Tokens = std::vector<std::string>;

// (smaller IRI, larger IRI, relationship_type): entity pairs are unordered.
using GoldKey = std::tuple<std::string, std::string, std::string>;

GoldKey gold_key(const Iri& e1, const Iri& e2, const std::string& relationship_type);

struct GoldStandard {
    std::vector<GoldKey> entries;  // unique, in file order
    std::map<GoldKey, std::vector<std::string>> references;

    bool contains(const GoldKey& k) const { return references.count(k) > 0; }
};

// `<e1> <e2> <relationship_type> TAB <reference explanation>` per line;
// repeated keys add references. Angle brackets around IRIs are optional.
GoldStandard parse_gold_standard(std::string_view source);
GoldStandard load_gold_standard_file(const std::string& path);

// `<e1> <e2> <relationship_type> TAB <rating>` per line.
struct RelevanceRating {
    GoldKey key;
    double rating;
};
std::vector<RelevanceRating> parse_ratings(std::string_view source);
std::vector<RelevanceRating> load_ratings_file(const std::string& path);

struct RetrievalScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Throws DomainError for an empty gold standard. Duplicate retrieved keys are
// counted once.
RetrievalScores precision_recall_f1(std::span<const ConnectionInstance> retrieved, const GoldStandard& gold);

inline constexpr double kBleuEpsilon = 1e-9;
inline constexpr double kRougeBeta = 1.2;

// Sentence BLEU-4: clipped n-gram precisions (clip = max count over
// references), zero or undefined precisions replaced by kBleuEpsilon,
// geometric mean, brevity penalty against the closest reference length.
double bleu(const Tokens& candidate, std::span<const Tokens> references);

// Length of the longest common subsequence.
std::size_t lcs_length(const Tokens& a, const Tokens& b);

// LCS F-measure with beta = 1.2.
double rouge_l(const Tokens& candidate, const Tokens& reference);

// Exact-match unigram alignment (max matches, then min chunks);
// Fmean = 10PR / (R + 9P), penalty = 0.5 (chunks / m)^3.
double meteor_lite(const Tokens& candidate, const Tokens& reference);

// Fewest chunks over all maximum exact-match alignments.
std::size_t min_chunks(const Tokens& candidate, const Tokens& reference);

// Average ranks for ties, 1-based.
std::vector<double> average_ranks(std::span<const double> xs);

// Pearson correlation of average ranks. Throws DomainError on length mismatch,
// n < 2 or a constant input.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct Diversity {
    double distinct1 = 0.0;
    double distinct2 = 0.0;
    std::size_t type_count = 0;
};

Diversity diversity(std::span<const std::string> explanations, std::span<const ConnectionInstance> connections);

struct MetricsReport {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double bleu = 0.0;
    double rouge_l = 0.0;
    double meteor = 0.0;
    std::optional<double> spearman;  // absent when no scored pairs apply
    double diversity_distinct1 = 0.0;
    double diversity_distinct2 = 0.0;
    std::size_t diversity_type_count = 0;
    std::size_t retrieved = 0;
    std::size_t text_scored = 0;  // retrieved entries with gold references
};

struct SystemOutput {
    ConnectionInstance connection;
    std::string explanation;
};

struct ScorePair {
    double model_score;
    double rating;
};

// Text metrics are averaged over retrieved entries that have gold references
// (best reference per entry for ROUGE-L and METEOR); zero when none do.
MetricsReport evaluate_system(std::span<const SystemOutput> outputs, const GoldStandard& gold,
                              std::span<const ScorePair> score_pairs);

// `key: value` lines in a fixed field order.
std::string format_report_text(const MetricsReport& r);

}  // namespace relex
