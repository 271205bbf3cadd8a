// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <cstddef>
#include <memory>
#include <semaphore>
#include <string>
#include <vector>

#include "relex/http.hpp"

namespace relex {

struct PromptInput {
    std::string entity1_description;
    std::string entity2_description;
    std::string relationship_type;
    double interestingness_score = 0.0;
    std::string user_context_description;
};

// Score rendered with exactly four decimals.
std::string format_score(double score);

// Instantiates the explanation prompt template byte for byte.
std::string build_prompt(const PromptInput& p);

// Fields recovered from a prompt; the score is kept as rendered.
struct ParsedPrompt {
    std::string entity1_description;
    std::string entity2_description;
    std::string relationship_type;
    std::string score_text;
    std::string user_context_description;
};

// Inverse of build_prompt. The two descriptions are split at the first " and "
// outside parentheses. Throws BackendError(InvalidPrompt) when the text does
// not follow the template.
ParsedPrompt parse_prompt(const std::string& prompt);

class GenerationBackend {
public:
    virtual ~GenerationBackend() = default;
    virtual std::string generate(const std::string& prompt) const = 0;
    virtual std::string id() const = 0;
    // Deterministic backends must mention both entity labels; remote output is
    // only checked and flagged.
    virtual bool deterministic() const { return false; }
};

std::string generate_stub(const std::string& prompt);

class StubGenerator final : public GenerationBackend {
public:
    std::string generate(const std::string& prompt) const override { return generate_stub(prompt); }
    std::string id() const override { return "stub"; }
    bool deterministic() const override { return true; }
};

struct FewShotExample {
    std::string prompt;
    std::string response;
};

struct RemoteGenerationConfig {
    HttpEndpoint endpoint;
    int max_tokens = 256;
    std::vector<FewShotExample> few_shot;
    std::ptrdiff_t max_in_flight = 2;
};

// Chat-style request body: few-shot examples as alternating user/assistant
// messages, then the prompt as the final user message.
nlohmann::json build_generation_request(const RemoteGenerationConfig& cfg, const std::string& prompt);

// POST {"messages": [...], "max_tokens": n} -> {"text": "..."}.
std::string generate_remote(const RemoteGenerationConfig& cfg, const std::string& prompt);

class RemoteGenerator final : public GenerationBackend {
public:
    explicit RemoteGenerator(RemoteGenerationConfig cfg);

    std::string generate(const std::string& prompt) const override;
    std::string id() const override { return "remote:" + cfg_.endpoint.url; }

private:
    RemoteGenerationConfig cfg_;
    mutable std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

}  // namespace relex
