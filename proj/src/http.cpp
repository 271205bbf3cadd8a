// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/http.hpp"

#include <httplib.h>

#include "relex/error.hpp"

namespace relex {

namespace {

struct SplitUrl {
    std::string origin;
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    auto scheme = url.find("://");
    if (scheme == std::string::npos) throw BackendError(BackendError::Kind::Network, "invalid endpoint URL: " + url);
    auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

httplib::Client make_client(const HttpEndpoint& ep, const SplitUrl& u) {
    httplib::Client cli(u.origin);
    auto secs = ep.timeout_ms / 1000;
    auto usecs = (ep.timeout_ms % 1000) * 1000;
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    cli.set_follow_location(true);
    if (!ep.token.empty()) cli.set_bearer_token_auth(ep.token);
    return cli;
}

void check_status(const httplib::Result& res, const std::string& url) {
    if (!res) throw BackendError(BackendError::Kind::Network, url + ": " + httplib::to_string(res.error()));
    if (res->status == 401 || res->status == 403)
        throw BackendError(BackendError::Kind::Auth, url + " returned " + std::to_string(res->status), res->status);
    if (res->status < 200 || res->status >= 300)
        throw BackendError(BackendError::Kind::HttpStatus, url + " returned " + std::to_string(res->status),
                           res->status);
}

}  // namespace

nlohmann::json post_json(const HttpEndpoint& endpoint, const nlohmann::json& body) {
    auto u = split_url(endpoint.url);
    auto cli = make_client(endpoint, u);
    httplib::Headers headers{{"User-Agent", endpoint.user_agent}, {"Accept", "application/json"}};
    auto res = cli.Post(u.path, headers, body.dump(), "application/json");
    check_status(res, endpoint.url);
    try {
        return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(BackendError::Kind::MalformedResponse, endpoint.url + ": " + e.what());
    }
}

std::string http_get(const HttpEndpoint& endpoint,
                     const std::vector<std::pair<std::string, std::string>>& params,
                     const std::string& accept) {
    auto u = split_url(endpoint.url);
    auto cli = make_client(endpoint, u);
    httplib::Params p(params.begin(), params.end());
    httplib::Headers headers{{"User-Agent", endpoint.user_agent}, {"Accept", accept}};
    auto res = cli.Get(u.path, p, headers);
    check_status(res, endpoint.url);
    return res->body;
}

}  // namespace relex
