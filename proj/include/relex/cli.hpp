// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace relex {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relex
