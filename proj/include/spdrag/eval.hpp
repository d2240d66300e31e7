// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spdrag/collection.hpp"
#include "spdrag/config.hpp"
#include "spdrag/document.hpp"
#include "spdrag/pipeline.hpp"
#include "spdrag/prompts.hpp"
#include "spdrag/providers.hpp"

namespace spdrag {

enum class TaskType { spotlight_locating, comparison, clustering, chain_of_reasoning };
enum class Domain { paper, financial };
enum class SystemKind { full_context, normal_rag, agentic_rag, spd_rag };

std::string task_type_name(TaskType t);
std::string domain_name(Domain d);
std::string system_name(SystemKind s);
TaskType parse_task_type(const std::string& name);
Domain parse_domain(const std::string& name);
// Usage error listing the valid names on an unknown system.
SystemKind parse_system(const std::string& name);
std::vector<SystemKind> all_systems();

struct EvalInstance {
    std::string id;
    std::string question;
    std::string gold_answer;
    std::vector<Document> documents;
    TaskType task_type = TaskType::spotlight_locating;
    Domain domain = Domain::paper;
};

// Canonical dataset: one instance per JSONL line with documents inlined or
// referenced by path (relative paths resolve against the dataset file).
std::vector<EvalInstance> load_dataset_jsonl(const std::string& path);

// Best-effort adapter for the public Loong release layout (question/answer/
// docs/type keys, numeric or named task types).
std::vector<EvalInstance> load_loong_jsonl(const std::string& path,
                                           const std::string& docs_dir);

struct SystemRun {
    std::string answer;
    RunTrace trace;
    bool skipped = false;
    std::string skip_reason;
};

// Pre-built per-instance indexes; indexing happens once, outside any
// system's accounting.
struct EvalIndexes {
    std::map<std::string, Collection> per_document;
    Collection global;
};

EvalIndexes build_eval_indexes(const EvalInstance& instance, const ProviderSet& providers,
                               const Config& config);

// All documents concatenated into a single prompt; zero retrievals. An
// instance over the context cap is marked skipped with a reason.
SystemRun run_full_context_baseline(const EvalInstance& instance, const ProviderSet& providers,
                                    const PromptLibrary& prompts, const Config& config);

// One global retrieval (embed -> top-K -> rerank) and one chat call.
SystemRun run_normal_rag(const EvalInstance& instance, const Collection& global_index,
                         const ProviderSet& providers, const PromptLibrary& prompts,
                         const Config& config);

// Single-agent iterative loop over the global index, capped at
// limits.agentic_max_iters searches.
SystemRun run_agentic_rag(const EvalInstance& instance, const Collection& global_index,
                          const ProviderSet& providers, const PromptLibrary& prompts,
                          const Config& config);

// The full pipeline: plan, per-document fan-out, recursive synthesis.
SystemRun run_spd_rag(const EvalInstance& instance, const EvalIndexes& indexes,
                      const ProviderSet& providers, const PromptLibrary& prompts,
                      const Config& config);

struct InstanceOutcome {
    std::string instance_id;
    SystemKind system = SystemKind::spd_rag;
    std::optional<int> score;  // unset when skipped or unscored
    bool skipped = false;
    std::string reason;
    RunMetrics metrics;

    nlohmann::json to_json() const;
};

struct CellAggregate {
    std::size_t n = 0;
    std::size_t n_scored = 0;
    double avg_score = 0.0;
    double perfect_rate = 0.0;
};

struct SystemAggregate {
    std::size_t n = 0;
    std::size_t n_scored = 0;
    std::size_t n_perfect = 0;
    std::size_t n_skipped = 0;
    std::size_t n_unscored = 0;
    double avg_score = 0.0;
    double perfect_rate = 0.0;  // 100 * perfect / scored
    double avg_input_tokens = 0.0;
    double avg_total_tokens = 0.0;
    double avg_cost = 0.0;
    double avg_latency = 0.0;
    double score_per_dollar = 0.0;
};

struct EvalReport {
    std::vector<SystemKind> systems;
    std::vector<InstanceOutcome> outcomes;  // (instance, system) order
    std::map<SystemKind, SystemAggregate> per_system;
    std::map<SystemKind, std::map<TaskType, CellAggregate>> by_task;
    std::map<SystemKind, std::map<Domain, CellAggregate>> by_domain;

    nlohmann::json to_json() const;
    std::string to_table() const;
    std::string to_csv() const;
};

// Mints a provider set with its own trace sink; evaluation creates one per
// (system, instance) run so accounting never crosses runs.
using ProviderMaker = std::function<ProviderSet(std::shared_ptr<TraceSink>)>;

// Scores every (system, instance) pair once. Instances run concurrently up
// to eval.parallelism; systems within an instance run sequentially. A judge
// failure leaves the pair unscored but counted.
EvalReport evaluate(const std::vector<SystemKind>& systems,
                    const std::vector<EvalInstance>& dataset, const Config& config,
                    const PromptLibrary& prompts, const ProviderMaker& make_providers);

}  // namespace spdrag
