// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "spdrag/collection.hpp"
#include "spdrag/config.hpp"
#include "spdrag/coordinator.hpp"
#include "spdrag/document.hpp"
#include "spdrag/prompts.hpp"
#include "spdrag/providers.hpp"
#include "spdrag/subagent.hpp"
#include "spdrag/synthesis.hpp"

namespace spdrag {

struct RunMetrics {
    std::size_t input_tokens = 0;
    std::size_t output_tokens = 0;
    std::size_t total_tokens = 0;
    double cost = 0.0;
    double latency_seconds = 0.0;

    nlohmann::json to_json() const;
};

struct RunResult {
    std::string answer;
    std::vector<Findings> findings;  // one per corpus document, corpus order
    TodoPlan plan;
    RunTrace trace;
    RunMetrics metrics;
    nlohmann::json merge_trace;

    // Canonical serialization: trace in canonical order, findings in corpus
    // order. Two mock runs of the same seeded fixture serialize identically.
    nlohmann::json to_json() const;
};

// Plan once, fan one agent out per document concurrently, then reduce the
// findings through recursive synthesis. The caller supplies a fresh trace
// sink in providers; metrics are computed from it.
RunResult run_query(const std::string& query, const std::vector<Document>& corpus,
                    const std::map<std::string, const Collection*>& collections,
                    const ProviderSet& providers, const PromptLibrary& prompts,
                    const Config& config);

}  // namespace spdrag
