// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "spdrag/config.hpp"
#include "spdrag/prompts.hpp"
#include "spdrag/providers.hpp"

namespace spdrag {

// High-level operations behind the C API: ingest a corpus into the index
// directory, answer a query over it, run the evaluation harness, summarize
// a trace file.
class Engine {
public:
    explicit Engine(Config config);

    const Config& config() const { return config_; }

    // Splits, embeds and persists every document; unchanged documents are
    // skipped by content hash. Per-file failures are reported, not fatal.
    nlohmann::json ingest(const std::string& corpus_path);

    // Runs the full pipeline over the ingested corpus. Returns the run
    // result as JSON; optionally writes the trace as JSONL.
    nlohmann::json query(const std::string& question, const std::string& trace_out = "");

    // Runs the named systems over a dataset. Returns
    // {"report": ..., "table": ..., "csv": ...}.
    nlohmann::json eval(const std::string& dataset_path,
                        const std::vector<std::string>& systems, bool loong_format = false);

    nlohmann::json trace_summary(const std::string& trace_path) const;

private:
    ProviderSet fresh_providers(std::shared_ptr<TraceSink> sink) const;

    Config config_;
    PromptLibrary prompts_;
    std::shared_ptr<RequestGate> gate_;
};

}  // namespace spdrag
