// SPDX-License-Identifier: Apache-2.0
#include "spdrag/trace.hpp"

#include <algorithm>
#include <fstream>

#include "spdrag/error.hpp"
#include "spdrag/strings.hpp"

namespace spdrag {

std::string role_name(Role role) {
    switch (role) {
        case Role::coordinator: return "coordinator";
        case Role::subagent: return "subagent";
        case Role::synthesizer: return "synthesizer";
        case Role::judge: return "judge";
        case Role::baseline: return "baseline";
        case Role::ingest: return "ingest";
    }
    return "unknown";
}

namespace {

Role role_from_name(const std::string& name) {
    if (name == "coordinator") return Role::coordinator;
    if (name == "subagent") return Role::subagent;
    if (name == "synthesizer") return Role::synthesizer;
    if (name == "judge") return Role::judge;
    if (name == "baseline") return Role::baseline;
    if (name == "ingest") return Role::ingest;
    throw validation_error("unknown trace role: " + name);
}

}  // namespace

nlohmann::json TraceEntry::to_json() const {
    nlohmann::json j{
        {"role", role_name(role)},
        {"kind", kind},
        {"label", label},
        {"model", model},
        {"input_tokens", input_tokens},
        {"output_tokens", output_tokens},
        {"latency_seconds", latency_seconds},
        {"started_at", started_at},
        {"finished_at", finished_at},
        {"ok", ok},
    };
    if (!error.empty()) j["error"] = error;
    if (!detail.is_null()) j["detail"] = detail;
    return j;
}

TraceEntry TraceEntry::from_json(const nlohmann::json& j) {
    TraceEntry e;
    e.role = role_from_name(j.at("role").get<std::string>());
    e.kind = j.at("kind").get<std::string>();
    e.label = j.at("label").get<std::string>();
    e.model = j.at("model").get<std::string>();
    e.input_tokens = j.at("input_tokens").get<std::size_t>();
    e.output_tokens = j.at("output_tokens").get<std::size_t>();
    e.latency_seconds = j.at("latency_seconds").get<double>();
    e.started_at = j.at("started_at").get<double>();
    e.finished_at = j.at("finished_at").get<double>();
    e.ok = j.at("ok").get<bool>();
    if (j.contains("error")) e.error = j.at("error").get<std::string>();
    if (j.contains("detail")) e.detail = j.at("detail");
    return e;
}

void TraceSink::append(TraceEntry entry) {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_.push_back(std::move(entry));
}

std::vector<TraceEntry> TraceSink::snapshot() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_;
}

std::size_t TraceSink::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

void TraceSink::clear() {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_.clear();
}

RunTrace canonical_order(RunTrace trace) {
    std::stable_sort(trace.begin(), trace.end(), [](const TraceEntry& a, const TraceEntry& b) {
        if (a.started_at != b.started_at) return a.started_at < b.started_at;
        if (a.label != b.label) return a.label < b.label;
        return a.kind < b.kind;
    });
    return trace;
}

double compute_cost(const RunTrace& trace, const PricingTable& pricing) {
    double total = 0.0;
    for (const auto& entry : trace) {
        if (entry.model == "-") continue;  // non-billable marker (kind "retrieval")
        auto it = pricing.models.find(entry.model);
        if (it == pricing.models.end()) {
            throw config_error("no pricing for model: " + entry.model);
        }
        total += static_cast<double>(entry.input_tokens) * it->second.input_per_token +
                 static_cast<double>(entry.output_tokens) * it->second.output_per_token;
    }
    return total;
}

std::size_t total_input_tokens(const RunTrace& trace) {
    std::size_t n = 0;
    for (const auto& e : trace) n += e.input_tokens;
    return n;
}

std::size_t total_output_tokens(const RunTrace& trace) {
    std::size_t n = 0;
    for (const auto& e : trace) n += e.output_tokens;
    return n;
}

void write_trace_jsonl(const RunTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write trace file: " + path);
    for (const auto& entry : trace) out << entry.to_json().dump() << '\n';
}

RunTrace read_trace_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read trace file: " + path);
    RunTrace trace;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            trace.push_back(TraceEntry::from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw io_error("bad trace line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return trace;
}

}  // namespace spdrag
