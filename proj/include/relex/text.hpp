// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace relex {

// Lowercases ASCII letters and splits on every byte that is not an ASCII
// letter or digit. Bytes >= 0x80 are kept as word characters so UTF-8 words
// ("Dalí") survive intact. Shared by the local embedder and the text metrics.
std::vector<std::string> tokenize(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace relex
