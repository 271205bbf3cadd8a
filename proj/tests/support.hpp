// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <atomic>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "relex/kg.hpp"

namespace relex::test {

inline std::string fixture(const std::string& name) { return std::string(RELEX_FIXTURE_DIR) + "/" + name; }
inline std::string test_data(const std::string& name) { return std::string(RELEX_TEST_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing test file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Iri node(int i) { return Iri("http://example.org/n" + std::to_string(i)); }
inline Iri pred(int i) { return Iri("http://example.org/p" + std::to_string(i)); }

// Random graph over `n` nodes with up to `edges` IRI-valued triples drawn
// from `preds` predicates; duplicates collapse, self-loops are allowed.
inline std::vector<Triple> random_triples(std::mt19937_64& rng, int n, int edges, int preds,
                                          int literals = 0) {
    std::uniform_int_distribution<int> nd(0, n - 1), pd(0, preds - 1);
    std::vector<Triple> out;
    for (int i = 0; i < edges; ++i) out.push_back({node(nd(rng)), pred(pd(rng)), Term{node(nd(rng))}});
    for (int i = 0; i < literals; ++i)
        out.push_back({node(nd(rng)), pred(pd(rng)), Term{Literal("v" + std::to_string(nd(rng)))}});
    return out;
}

// Malformed DSL programs, each headed by `%%% line:column description`.
struct Malformed {
    std::size_t line;
    std::size_t column;
    std::string what;
    std::string source;
};

inline std::vector<Malformed> malformed_corpus() {
    std::istringstream in(slurp(test_data("dsl_malformed.txt")));
    std::vector<Malformed> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("%%% ", 0) == 0) {
            Malformed m;
            std::istringstream hdr(line.substr(4));
            char colon = 0;
            hdr >> m.line >> colon >> m.column;
            std::getline(hdr, m.what);
            out.push_back(m);
        } else if (!out.empty()) {
            out.back().source += line + "\n";
        }
    }
    return out;
}

// Local HTTP server for replaying recorded responses.
class ReplayServer {
public:
    using Handler = httplib::Server::Handler;

    ReplayServer() = default;
    ~ReplayServer() { stop(); }

    void get(const std::string& path, Handler h) { server_.Get(path, std::move(h)); }
    void post(const std::string& path, Handler h) { server_.Post(path, std::move(h)); }

    void start() {
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    void stop() {
        if (thread_.joinable()) {
            server_.stop();
            thread_.join();
        }
    }

    int port() const { return port_; }
    std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace relex::test
