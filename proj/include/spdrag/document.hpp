// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <string>

namespace spdrag {

struct Document {
    std::string id;
    std::string name;  // display name, fed into the worker prompt
    std::string text;
    std::map<std::string, std::string> metadata;
};

struct Chunk {
    std::string doc_id;
    std::size_t seq = 0;
    std::string text;
    std::size_t token_count = 0;
    // Byte length of the leading region copied from the previous chunk.
    // 0 for the first chunk; stripping it and concatenating in seq order
    // reproduces the source text exactly.
    std::size_t overlap_chars = 0;
};

}  // namespace spdrag
