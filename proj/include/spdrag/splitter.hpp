// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "spdrag/document.hpp"
#include "spdrag/tokenizer.hpp"

namespace spdrag {

struct SplitOptions {
    std::size_t chunk_size = 1000;
    std::size_t chunk_overlap = 250;
};

// Markdown-aware recursive split. Separator hierarchy, tried in order:
// ATX headings, fenced code blocks, horizontal rules, blank line, newline,
// space, single character. A segment is split with the next separator only
// when it exceeds chunk_size tokens. Each chunk after the first starts with
// the trailing <= chunk_overlap tokens of the previous chunk, taken as whole
// separator units.
std::vector<Chunk> split_document(const Document& doc, const SplitOptions& options,
                                  const TokenCounter& counter);

std::size_t count_tokens(std::string_view text, const TokenCounter& counter);

// The atomic units the packer works with: segments small enough to fit the
// budget, concatenating to the source text exactly. Exposed for tests.
std::vector<std::string> split_units(std::string_view text, std::size_t chunk_size,
                                     const TokenCounter& counter);

}  // namespace spdrag
