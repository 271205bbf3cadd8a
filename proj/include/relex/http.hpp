// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace relex {

struct HttpEndpoint {
    std::string url;  // scheme://host[:port]/path
    std::string token;  // sent as a bearer token when non-empty
    int timeout_ms = 30000;
    std::string user_agent = "relex/0.1";
};

// POSTs a JSON document and parses the JSON reply. Throws BackendError with
// kind Network, Auth (401/403), HttpStatus (other non-2xx) or
// MalformedResponse (body is not JSON).
nlohmann::json post_json(const HttpEndpoint& endpoint, const nlohmann::json& body);

// GET with query parameters; returns the raw body of a 2xx reply.
std::string http_get(const HttpEndpoint& endpoint,
                     const std::vector<std::pair<std::string, std::string>>& params,
                     const std::string& accept);

}  // namespace relex
