// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <memory>
#include <string>

#include "relex/engine.hpp"

namespace httplib {
class Server;
}

namespace relex {

// HTTP front end over an Engine. Handlers run concurrently; each request
// works on the snapshot current when it started.
class Server {
public:
    explicit Server(Engine& engine);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // Port 0 picks a free port. Returns the bound port; throws Error if busy.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    void run();
    void stop();
    void wait_until_ready() const;

private:
    void install_routes();

    Engine& engine_;
    std::unique_ptr<httplib::Server> http_;
};

}  // namespace relex
