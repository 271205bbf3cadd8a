// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "relex/error.hpp"
#include "relex/text.hpp"

namespace relex {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

Embedding::Embedding(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_)
        if (!std::isfinite(v)) throw DomainError("embedding component is not finite");
}

bool Embedding::is_zero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double cosine(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim())
        throw DomainError("cosine of embeddings with different dimensions (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
    double dot = 0.0, na = 0.0, nb = 0.0;
    const auto& x = a.values();
    const auto& y = b.values();
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot += x[i] * y[i];
        na += x[i] * x[i];
        nb += y[i] * y[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

HashingEmbedder::HashingEmbedder(std::size_t dim) : dim_(dim) {
    if (dim_ == 0) throw DomainError("embedding dimension must be positive");
}

Embedding HashingEmbedder::embed(std::string_view text) const {
    std::vector<double> v(dim_, 0.0);
    for (const auto& tok : tokenize(text)) {
        auto h = fnv1a64(tok);
        v[h % dim_] += ((h >> 32) & 1u) ? -1.0 : 1.0;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;
    }
    return Embedding(std::move(v));
}

Embedding embed_local(std::string_view text) { return HashingEmbedder().embed(text); }

RemoteEmbedder::RemoteEmbedder(HttpEndpoint endpoint, std::size_t dim, std::ptrdiff_t max_in_flight)
    : endpoint_(std::move(endpoint)),
      dim_(dim),
      in_flight_(std::make_unique<std::counting_semaphore<>>(std::max<std::ptrdiff_t>(1, max_in_flight))) {
    if (dim_ == 0) throw DomainError("embedding dimension must be positive");
}

Embedding RemoteEmbedder::embed(std::string_view text) const {
    in_flight_->acquire();
    struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
    } release{*in_flight_};
    return embed_remote(endpoint_, dim_, text);
}

Embedding embed_remote(const HttpEndpoint& endpoint, std::size_t dim, std::string_view text) {
    auto reply = post_json(endpoint, nlohmann::json{{"input", std::string(text)}});
    if (!reply.is_object() || !reply.contains("embedding") || !reply["embedding"].is_array())
        throw BackendError(BackendError::Kind::MalformedResponse, "reply has no \"embedding\" array");
    std::vector<double> values;
    values.reserve(reply["embedding"].size());
    for (const auto& x : reply["embedding"]) {
        if (!x.is_number())
            throw BackendError(BackendError::Kind::MalformedResponse, "non-numeric embedding component");
        double v = x.get<double>();
        if (!std::isfinite(v))
            throw BackendError(BackendError::Kind::MalformedResponse, "non-finite embedding component");
        values.push_back(v);
    }
    if (values.size() != dim)
        throw BackendError(BackendError::Kind::DimensionMismatch,
                           "expected " + std::to_string(dim) + " components, got " + std::to_string(values.size()));
    return Embedding(std::move(values));
}

Embedding MemoEmbedder::embed(std::string_view text) const {
    {
        std::lock_guard lock(mu_);
        auto it = memo_.find(text);
        if (it != memo_.end()) return it->second;
    }
    auto e = inner_.embed(text);
    std::lock_guard lock(mu_);
    memo_.emplace(std::string(text), e);
    return e;
}

}  // namespace relex
