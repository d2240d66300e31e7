// SPDX-License-Identifier: Apache-2.0
#include "spdrag/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>

#include "spdrag/error.hpp"
#include "spdrag/parallel.hpp"
#include "spdrag/strings.hpp"

namespace spdrag {

namespace {

constexpr double kAgentLaneBase = 10.0;
constexpr double kAgentLaneStride = 2.0;

double wall_now() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

}  // namespace

nlohmann::json RunMetrics::to_json() const {
    return nlohmann::json{{"input_tokens", input_tokens},
                          {"output_tokens", output_tokens},
                          {"total_tokens", total_tokens},
                          {"cost", cost},
                          {"latency_seconds", latency_seconds}};
}

nlohmann::json RunResult::to_json() const {
    auto findings_json = nlohmann::json::array();
    for (const auto& f : findings) findings_json.push_back(f.to_json());
    auto trace_json = nlohmann::json::array();
    for (const auto& entry : canonical_order(trace)) trace_json.push_back(entry.to_json());
    return nlohmann::json{{"answer", answer},
                          {"findings", findings_json},
                          {"plan", plan.to_json()},
                          {"trace", trace_json},
                          {"metrics", metrics.to_json()},
                          {"merge_trace", merge_trace}};
}

RunResult run_query(const std::string& query, const std::vector<Document>& corpus,
                    const std::map<std::string, const Collection*>& collections,
                    const ProviderSet& providers, const PromptLibrary& prompts,
                    const Config& config) {
    if (corpus.empty()) throw validation_error("corpus must be non-empty");
    for (const auto& doc : corpus) {
        auto it = collections.find(doc.id);
        if (it == collections.end() || it->second == nullptr) {
            throw validation_error("document is not indexed: " + doc.id);
        }
    }
    if (!providers.trace) throw validation_error("pipeline requires a trace sink");

    double wall_start = wall_now();
    std::size_t trace_start = providers.trace->size();

    RunResult result;
    result.plan = plan(query, *providers.chat, prompts);

    // one worker per document, all dispatched concurrently
    result.findings.resize(corpus.size());
    parallel_for(corpus.size(), config.providers.request_cap, [&](std::size_t i) {
        SubagentOptions options;
        options.max_searches = config.limits.subagent_max_searches;
        options.retrieve_k = config.retrieval.k;
        options.rerank_top_n = config.retrieval.top_n;
        options.role = Role::subagent;
        options.label_prefix = "subagent";
        options.lane_base = kAgentLaneBase + static_cast<double>(i) * kAgentLaneStride;
        result.findings[i] = run_subagent(query, corpus[i], result.plan,
                                          *collections.at(corpus[i].id), providers, prompts,
                                          options);
    });

    SummarySet level0;
    level0.items.reserve(result.findings.size());
    for (const auto& f : result.findings) {
        level0.items.push_back(SummaryItem{f.doc_id, f.summary, f.token_count});
    }

    SynthesisOptions synth_options;
    synth_options.budget_b = config.synthesis.budget_b;
    synth_options.singleton_synthesis = config.synthesis.singleton_synthesis;
    // the simulated-clock synthesis lane starts after every agent lane
    synth_options.lane_base =
        kAgentLaneBase + static_cast<double>(corpus.size()) * kAgentLaneStride + 10.0;
    synth_options.max_workers = config.providers.request_cap;
    try {
        SynthesisResult synthesis = recursive_synthesis(
            level0, query, result.plan.synthesis_directive, providers, prompts, synth_options);
        result.answer = synthesis.summary;
        result.merge_trace = std::move(synthesis.merge_trace);
    } catch (const Error& e) {
        // abort, but leave the plan and the gathered findings on disk
        nlohmann::json dump{{"query", query}, {"plan", result.plan.to_json()}};
        auto& findings_json = dump["findings"] = nlohmann::json::array();
        for (const auto& f : result.findings) findings_json.push_back(f.to_json());
        std::string where = "(not persisted: no index_dir configured)";
        if (!config.paths.index_dir.empty()) {
            try {
                std::filesystem::create_directories(config.paths.index_dir);
                auto path = std::filesystem::path(config.paths.index_dir) /
                            ("partial-run-" + hex64(fnv1a64(query)) + ".json");
                std::ofstream out(path);
                out << dump.dump(2);
                where = path.string();
            } catch (const std::exception&) {
            }
        }
        throw provider_error(std::string("synthesis failed: ") + e.what() +
                             "; partial state at " + where);
    }

    auto all_entries = providers.trace->snapshot();
    result.trace.assign(all_entries.begin() + static_cast<std::ptrdiff_t>(trace_start),
                        all_entries.end());
    // canonical order before any float accumulation: concurrent agents append
    // in arrival order, and a different summation order would wiggle the cost
    // in the last ulp across reruns
    result.trace = canonical_order(std::move(result.trace));

    result.metrics.input_tokens = total_input_tokens(result.trace);
    result.metrics.output_tokens = total_output_tokens(result.trace);
    result.metrics.total_tokens = result.metrics.input_tokens + result.metrics.output_tokens;
    result.metrics.cost = compute_cost(result.trace, config.providers.pricing);
    if (providers.simulated_clock) {
        double first = std::numeric_limits<double>::infinity();
        double last = 0.0;
        for (const auto& e : result.trace) {
            first = std::min(first, e.started_at);
            last = std::max(last, e.finished_at);
        }
        result.metrics.latency_seconds = result.trace.empty() ? 0.0 : last - first;
    } else {
        result.metrics.latency_seconds = wall_now() - wall_start;
    }
    return result;
}

}  // namespace spdrag
