// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace spdrag {

enum class Role {
    coordinator,
    subagent,
    synthesizer,
    judge,
    baseline,
    ingest,
};

std::string role_name(Role role);

// One entry per external call. kind is "chat", "embed", "rerank" or "judge";
// label identifies the logical lane (e.g. "subagent:doc3:turn1").
struct TraceEntry {
    Role role = Role::baseline;
    std::string kind;
    std::string label;
    std::string model;
    std::size_t input_tokens = 0;
    std::size_t output_tokens = 0;
    double latency_seconds = 0.0;
    double started_at = 0.0;
    double finished_at = 0.0;
    bool ok = true;
    std::string error;
    nlohmann::json detail;  // e.g. retrieved chunk ids for rerank calls

    nlohmann::json to_json() const;
    static TraceEntry from_json(const nlohmann::json& j);
};

// Caller-supplied context for one external call. logical_start orders the
// entry deterministically when the simulated clock is active.
struct TraceCtx {
    Role role = Role::baseline;
    std::string label;
    double logical_start = 0.0;
};

// Append-only, safe under concurrent writers.
class TraceSink {
public:
    void append(TraceEntry entry);
    std::vector<TraceEntry> snapshot() const;
    std::size_t size() const;
    void clear();

private:
    mutable std::mutex mutex_;
    std::vector<TraceEntry> entries_;
};

using RunTrace = std::vector<TraceEntry>;

// Entries ordered by (started_at, label, kind): deterministic under the
// simulated clock regardless of thread interleaving.
RunTrace canonical_order(RunTrace trace);

struct ModelPrice {
    double input_per_token = 0.0;
    double output_per_token = 0.0;
};

struct PricingTable {
    std::map<std::string, ModelPrice> models;
};

// Sum over all entries of input*in_price + output*out_price. Unknown model
// names are an error; failed attempts still accrue their recorded tokens.
double compute_cost(const RunTrace& trace, const PricingTable& pricing);

std::size_t total_input_tokens(const RunTrace& trace);
std::size_t total_output_tokens(const RunTrace& trace);

void write_trace_jsonl(const RunTrace& trace, const std::string& path);
RunTrace read_trace_jsonl(const std::string& path);

}  // namespace spdrag
