// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spdrag/collection.hpp"

namespace spdrag::promptfmt {

// Block formats the pipeline writes into model prompts. The deterministic
// mock providers parse these same markers, so they live in one place.

inline constexpr std::string_view kForcedFinalizeLine =
    "You must finalize now: search is disabled. Output a finalize action with your findings.";

std::string agent_user_content(const std::string& query, const std::vector<std::string>& tasks,
                               const std::vector<std::string>& evidence_blocks,
                               bool force_finalize);

std::string evidence_block(std::size_t search_no, const std::string& search_query,
                           const std::vector<ScoredChunk>& results);

std::string findings_section(const std::string& id, const std::string& text);

std::string context_section(const std::string& meta, const std::string& text);

// Parsers used by the mock chat provider.
std::size_t count_search_blocks(std::string_view user_content);
std::vector<std::string> parse_tasks(std::string_view user_content);
std::vector<std::string> parse_evidence_texts(std::string_view user_content);
bool has_forced_finalize(std::string_view user_content);
std::vector<std::pair<std::string, std::string>> parse_findings_sections(
    std::string_view content);
std::vector<std::string> parse_context_texts(std::string_view content);

}  // namespace spdrag::promptfmt
