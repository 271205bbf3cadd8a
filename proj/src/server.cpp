// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/server.hpp"

#include <sstream>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "relex/error.hpp"

namespace relex {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const json::exception& e) {
            send_json(res, {{"error", std::string("malformed request: ") + e.what()}}, 400);
        } catch (const ParseError& e) {
            send_json(res, {{"error", e.what()}}, 400);
        } catch (const DomainError& e) {
            send_json(res, {{"error", e.what()}}, 400);
        } catch (const BackendError& e) {
            send_json(res, {{"error", e.what()}, {"kind", BackendError::kind_name(e.kind())}}, 502);
        } catch (const Error& e) {
            send_json(res, {{"error", e.what()}}, 422);
        } catch (const std::exception& e) {
            spdlog::error("{} {}: {}", req.method, req.path, e.what());
            send_json(res, {{"error", e.what()}}, 500);
        }
    };
}

json body_object(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    auto j = json::parse(req.body);
    if (!j.is_object()) throw DomainError("request body must be an object");
    return j;
}

std::size_t param_count(const httplib::Request& req, const char* name, std::size_t fallback) {
    if (!req.has_param(name)) return fallback;
    auto v = req.get_param_value(name);
    try {
        std::size_t used = 0;
        auto n = std::stoll(v, &used);
        if (used != v.size() || n < 0) throw std::invalid_argument(v);
        return static_cast<std::size_t>(n);
    } catch (const std::logic_error&) {
        throw DomainError(std::string(name) + " must be a non-negative integer");
    }
}

}  // namespace

Server::Server(Engine& engine) : engine_(engine), http_(std::make_unique<httplib::Server>()) { install_routes(); }

Server::~Server() { stop(); }

void Server::install_routes() {
    auto& s = *http_;
    s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    s.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    s.Get("/health", guarded([this](const httplib::Request&, httplib::Response& res) {
              send_json(res, {{"status", "ok"}, {"triples", engine_.stats().triples}});
          }));

    s.Post("/graphs", guarded([this](const httplib::Request& req, httplib::Response& res) {
               KnowledgeGraph kg;
               auto type = req.get_header_value("Content-Type");
               const auto& opts = engine_.config().graph_options;
               if (type.find("json") != std::string::npos) {
                   auto j = body_object(req);
                   kg = load_ntriples_file(j.at("path").get<std::string>(), opts);
               } else {
                   std::istringstream in(req.body);
                   kg = load_ntriples(in, opts);
               }
               auto st = engine_.replace_graph(std::move(kg));
               spdlog::info("graph replaced: {} triples", st.triples);
               send_json(res, {{"triples", st.triples}, {"entities", st.entities}});
           }));

    s.Get("/entities", guarded([this](const httplib::Request& req, httplib::Response& res) {
              auto hits = engine_.search_entities(req.get_param_value("q"), param_count(req, "limit", 20));
              json list = json::array();
              for (const auto& h : hits) list.push_back({{"iri", h.iri.value()}, {"label", h.label}});
              send_json(res, {{"entities", list}});
          }));

    s.Post("/discover", guarded([this](const httplib::Request& req, httplib::Response& res) {
               auto j = body_object(req);
               auto conns = engine_.discover(j.value("query_set", std::string(kDefaultQuerySet)));
               json list = json::array();
               for (const auto& c : conns) list.push_back(to_json(c));
               send_json(res, {{"connections", list}});
           }));

    s.Post("/explore", guarded([this](const httplib::Request& req, httplib::Response& res) {
               send_json(res, to_json(engine_.explore(explore_request_from_json(json::parse(req.body)))));
           }));

    s.Post("/evaluate", guarded([this](const httplib::Request& req, httplib::Response& res) {
               auto j = body_object(req);
               auto kind = parse_system_kind(j.value("system", std::string("full")));
               send_json(res, to_json(engine_.evaluate(kind, j.value("gold", std::string()))));
           }));

    s.Get("/facets", guarded([this](const httplib::Request& req, httplib::Response& res) {
              auto qs = req.has_param("query_set") ? req.get_param_value("query_set") : std::string(kDefaultQuerySet);
              json types = json::array();
              for (const auto& f : engine_.facets(qs))
                  types.push_back({{"relationship_type", f.relationship_type}, {"count", f.count}});
              send_json(res, {{"relationship_types", types}, {"score", {{"min", -1.0}, {"max", 1.0}}}});
          }));

    s.Post("/baseline", guarded([this](const httplib::Request& req, httplib::Response& res) {
               auto j = body_object(req);
               auto e1 = iri_from_text(j.at("entity1").get<std::string>());
               auto e2 = iri_from_text(j.at("entity2").get<std::string>());
               if (e1 == e2) throw DomainError("entity1 and entity2 must differ");
               auto r = engine_.graph_baseline(e1, e2);
               if (!r) {
                   send_json(res, {{"error", "no path"}}, 404);
                   return;
               }
               send_json(res, to_json(*r));
           }));
}

int Server::bind(const std::string& host, int port) {
    if (port == 0) {
        int p = http_->bind_to_any_port(host);
        if (p < 0) throw Error("cannot bind " + host);
        return p;
    }
    if (!http_->bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void Server::run() { http_->listen_after_bind(); }

void Server::stop() {
    if (http_ && http_->is_running()) http_->stop();
}

void Server::wait_until_ready() const { http_->wait_until_ready(); }

}  // namespace relex
