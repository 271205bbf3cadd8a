// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "relex/http.hpp"

namespace relex {

// Finite real vector of fixed dimension.
class Embedding {
public:
    Embedding() = default;
    explicit Embedding(std::vector<double> values);

    std::size_t dim() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }
    bool is_zero() const noexcept;

    friend bool operator==(const Embedding&, const Embedding&) = default;

private:
    std::vector<double> values_;
};

// dot(a, b) / (|a| |b|), clamped to [-1, 1]; 0 when either vector is zero.
// Throws DomainError on dimension mismatch.
double cosine(const Embedding& a, const Embedding& b);

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    virtual Embedding embed(std::string_view text) const = 0;
    virtual std::size_t dim() const = 0;
    virtual std::string id() const = 0;
};

// Signed feature hashing over the shared tokenizer: every token adds +1 or -1
// to one of `dim` buckets (FNV-1a 64: bucket = h % dim, sign from bit 32),
// then the vector is L2-normalised. Text without tokens maps to zero.
class HashingEmbedder final : public EmbeddingBackend {
public:
    static constexpr std::size_t kDefaultDim = 256;

    explicit HashingEmbedder(std::size_t dim = kDefaultDim);

    Embedding embed(std::string_view text) const override;
    std::size_t dim() const override { return dim_; }
    std::string id() const override { return "local-hash-" + std::to_string(dim_); }

private:
    std::size_t dim_;
};

Embedding embed_local(std::string_view text);

// POST {"input": text} -> {"embedding": [...]}.
class RemoteEmbedder final : public EmbeddingBackend {
public:
    RemoteEmbedder(HttpEndpoint endpoint, std::size_t dim, std::ptrdiff_t max_in_flight = 4);

    Embedding embed(std::string_view text) const override;
    std::size_t dim() const override { return dim_; }
    std::string id() const override { return "remote:" + endpoint_.url; }

private:
    HttpEndpoint endpoint_;
    std::size_t dim_;
    mutable std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

Embedding embed_remote(const HttpEndpoint& endpoint, std::size_t dim, std::string_view text);

// Per-run memo table in front of another backend.
class MemoEmbedder final : public EmbeddingBackend {
public:
    explicit MemoEmbedder(const EmbeddingBackend& inner) : inner_(inner) {}

    Embedding embed(std::string_view text) const override;
    std::size_t dim() const override { return inner_.dim(); }
    std::string id() const override { return inner_.id(); }

private:
    const EmbeddingBackend& inner_;
    mutable std::mutex mu_;
    mutable std::map<std::string, Embedding, std::less<>> memo_;
};

}  // namespace relex
