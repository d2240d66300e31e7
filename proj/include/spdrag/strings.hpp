// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace spdrag {

std::vector<std::string> split_whitespace(std::string_view text);

// Lowercased alphanumeric words; everything else is a separator.
std::vector<std::string> normalized_words(std::string_view text);

std::string to_lower(std::string_view text);

bool starts_with(std::string_view text, std::string_view prefix);

std::string trim(std::string_view text);

// Replaces every "{name}" placeholder; unknown placeholders are left alone.
std::string interpolate(std::string_view tmpl,
                        const std::vector<std::pair<std::string, std::string>>& values);

// Heuristic sentence count (terminators followed by space or end).
std::size_t sentence_count(std::string_view text);

std::uint64_t fnv1a64(std::string_view data);

std::string hex64(std::uint64_t value);

// Filesystem-safe slug: alnum/-/_ kept, the rest mapped to '_', hash suffix appended.
std::string file_slug(std::string_view id);

}  // namespace spdrag
