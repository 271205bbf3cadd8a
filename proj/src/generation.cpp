// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/generation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "relex/error.hpp"

namespace relex {

namespace {

constexpr std::string_view kOpening = "Generate a natural language explanation that connects ";
constexpr std::string_view kTypeLine = ".\nThe relationship type is ";
constexpr std::string_view kScoreLine = ".\nThe interestingness score is: ";
constexpr std::string_view kContextLine = ".\nThe user context is: ";
constexpr std::string_view kClosing =
    ".\nExplain this relationship in a way that reflects its interestingness, and the user context. "
    "Be specific, and avoid generic statements that could apply to other entities.";

[[noreturn]] void bad_prompt(const std::string& why) {
    throw BackendError(BackendError::Kind::InvalidPrompt, why);
}

}  // namespace

std::string format_score(double score) {
    if (!std::isfinite(score)) throw DomainError("interestingness score must be finite");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", score);
    return buf;
}

std::string build_prompt(const PromptInput& p) {
    std::string out;
    out += kOpening;
    out += p.entity1_description;
    out += " and ";
    out += p.entity2_description;
    out += kTypeLine;
    out += p.relationship_type;
    out += kScoreLine;
    out += format_score(p.interestingness_score);
    out += kContextLine;
    out += p.user_context_description;
    out += kClosing;
    return out;
}

ParsedPrompt parse_prompt(const std::string& prompt) {
    std::string_view s(prompt);
    if (!s.starts_with(kOpening)) bad_prompt("missing opening line");
    if (!s.ends_with(kClosing)) bad_prompt("missing closing instruction");
    s.remove_prefix(kOpening.size());
    s.remove_suffix(kClosing.size());

    auto type_at = s.find(kTypeLine);
    if (type_at == std::string_view::npos) bad_prompt("missing relationship type line");
    auto entities = s.substr(0, type_at);
    s.remove_prefix(type_at + kTypeLine.size());

    auto score_at = s.find(kScoreLine);
    if (score_at == std::string_view::npos) bad_prompt("missing score line");
    ParsedPrompt out;
    out.relationship_type = std::string(s.substr(0, score_at));
    s.remove_prefix(score_at + kScoreLine.size());

    auto ctx_at = s.find(kContextLine);
    if (ctx_at == std::string_view::npos) bad_prompt("missing user context line");
    out.score_text = std::string(s.substr(0, ctx_at));
    out.user_context_description = std::string(s.substr(ctx_at + kContextLine.size()));

    int depth = 0;
    std::size_t split = std::string_view::npos;
    for (std::size_t i = 0; i < entities.size(); ++i) {
        char c = entities[i];
        if (c == '(') ++depth;
        else if (c == ')') depth = std::max(0, depth - 1);
        else if (depth == 0 && entities.compare(i, 5, " and ") == 0) {
            split = i;
            break;
        }
    }
    if (split == std::string_view::npos) bad_prompt("cannot separate the two entity descriptions");
    out.entity1_description = std::string(entities.substr(0, split));
    out.entity2_description = std::string(entities.substr(split + 5));
    if (out.entity1_description.empty() || out.entity2_description.empty())
        bad_prompt("empty entity description");
    return out;
}

std::string generate_stub(const std::string& prompt) {
    auto p = parse_prompt(prompt);
    return p.entity1_description + " is connected to " + p.entity2_description + " through the relationship '" +
           p.relationship_type + "' (interestingness " + p.score_text +
           "); this is relevant to a user interested in " + p.user_context_description + ".";
}

nlohmann::json build_generation_request(const RemoteGenerationConfig& cfg, const std::string& prompt) {
    auto messages = nlohmann::json::array();
    for (const auto& ex : cfg.few_shot) {
        messages.push_back({{"role", "user"}, {"content", ex.prompt}});
        messages.push_back({{"role", "assistant"}, {"content", ex.response}});
    }
    messages.push_back({{"role", "user"}, {"content", prompt}});
    return {{"messages", messages}, {"max_tokens", cfg.max_tokens}};
}

std::string generate_remote(const RemoteGenerationConfig& cfg, const std::string& prompt) {
    auto reply = post_json(cfg.endpoint, build_generation_request(cfg, prompt));
    if (!reply.is_object() || !reply.contains("text") || !reply["text"].is_string())
        throw BackendError(BackendError::Kind::MalformedResponse, "reply has no \"text\" string");
    auto text = reply["text"].get<std::string>();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        throw BackendError(BackendError::Kind::EmptyCompletion, "endpoint returned an empty completion");
    return text;
}

RemoteGenerator::RemoteGenerator(RemoteGenerationConfig cfg)
    : cfg_(std::move(cfg)),
      in_flight_(std::make_unique<std::counting_semaphore<>>(std::max<std::ptrdiff_t>(1, cfg_.max_in_flight))) {}

std::string RemoteGenerator::generate(const std::string& prompt) const {
    in_flight_->acquire();
    struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
    } release{*in_flight_};
    return generate_remote(cfg_, prompt);
}

}  // namespace relex
