// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relex {

// Base for every error the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Syntax or semantic error in N-Triples, the pattern DSL, or one of the
// small line-oriented fixture formats. Line and column are 1-based; column is
// 0 when only the line is known.
class ParseError : public Error {
public:
    ParseError(std::string message, std::size_t line, std::size_t column, std::string token = {})
        : Error(format(message, line, column, token)),
          message_(std::move(message)),
          line_(line),
          column_(column),
          token_(std::move(token)) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& token() const noexcept { return token_; }
    const std::string& detail() const noexcept { return message_; }

private:
    static std::string format(const std::string& message, std::size_t line, std::size_t column,
                              const std::string& token) {
        std::string out = "line " + std::to_string(line);
        if (column > 0) out += ", column " + std::to_string(column);
        out += ": " + message;
        if (!token.empty()) out += " near '" + token + "'";
        return out;
    }

    std::string message_;
    std::size_t line_;
    std::size_t column_;
    std::string token_;
};

// Precondition violations on numeric inputs (alpha out of range, identical
// path endpoints, non-positive weights, mismatched dimensions, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Failures talking to a remote embedding, generation or query endpoint.
class BackendError : public Error {
public:
    enum class Kind {
        Network,
        HttpStatus,
        Auth,
        MalformedResponse,
        DimensionMismatch,
        EmptyCompletion,
        InvalidPrompt,
    };

    BackendError(Kind kind, const std::string& message, int status = 0)
        : Error(std::string(kind_name(kind)) + ": " + message), kind_(kind), status_(status) {}

    Kind kind() const noexcept { return kind_; }
    // HTTP status when the failure came with one, else 0.
    int status() const noexcept { return status_; }

    static const char* kind_name(Kind kind) noexcept {
        switch (kind) {
        case Kind::Network: return "network error";
        case Kind::HttpStatus: return "http error";
        case Kind::Auth: return "auth error";
        case Kind::MalformedResponse: return "malformed response";
        case Kind::DimensionMismatch: return "dimension mismatch";
        case Kind::EmptyCompletion: return "empty completion";
        case Kind::InvalidPrompt: return "invalid prompt";
        }
        return "backend error";
    }

private:
    Kind kind_;
    int status_;
};

}  // namespace relex
