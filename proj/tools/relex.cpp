// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include <iostream>
#include <string>
#include <vector>

#include "relex/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return relex::run_cli(args, std::cout, std::cerr);
}
