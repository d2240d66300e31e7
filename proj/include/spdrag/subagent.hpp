// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spdrag/collection.hpp"
#include "spdrag/coordinator.hpp"
#include "spdrag/document.hpp"
#include "spdrag/prompts.hpp"
#include "spdrag/providers.hpp"

namespace spdrag {

struct AgentAction {
    enum class Kind { search, finalize };
    Kind action = Kind::search;
    std::string query;      // search only
    std::string reasoning;
    std::string findings;   // finalize only
    double relevance = 0.0; // finalize only

    static AgentAction from_json(const nlohmann::json& j);
};

struct Findings {
    std::string doc_id;
    std::string summary;
    double relevance = 0.0;
    std::size_t searches_used = 0;
    std::size_t token_count = 0;
    std::optional<std::string> error;  // set when the agent degraded on a provider failure

    nlohmann::json to_json() const;
    static Findings from_json(const nlohmann::json& j);
};

struct SubagentOptions {
    std::size_t max_searches = 5;
    std::size_t retrieve_k = 15;
    std::size_t rerank_top_n = 5;
    Role role = Role::subagent;
    std::string label_prefix = "subagent";
    // Simulated-clock lane for this agent; turns are spaced inside it.
    double lane_base = 10.0;
};

// embed the query, take the top retrieve_k by cosine, then rerank down to
// rerank_top_n. Scores on the returned chunks are the reranker's relevances
// and the order is the reranker's. An empty collection yields no evidence.
std::vector<ScoredChunk> execute_search(const std::string& search_query,
                                        const Collection& collection,
                                        EmbeddingProvider& embedder, Reranker& reranker,
                                        const SubagentOptions& options, const TraceCtx& ctx);

// One iterative retrieve-and-reason loop over a single document. Terminates
// within max_searches + 2 model calls; a provider failure mid-loop degrades
// to error-marked findings instead of aborting the run.
Findings run_subagent(const std::string& query, const Document& doc, const TodoPlan& plan,
                      const Collection& collection, const ProviderSet& providers,
                      const PromptLibrary& prompts, const SubagentOptions& options,
                      std::vector<nlohmann::json>* transcript = nullptr);

// Shared loop used by the corpus-wide single-agent baseline: same action
// schema and retrieval pipeline, no task list, findings become the answer.
Findings run_agent_loop(const std::string& query, const std::string& scope_name,
                        const std::vector<std::string>& tasks, const Collection& collection,
                        const ProviderSet& providers, const std::string& system_prompt,
                        const SubagentOptions& options,
                        std::vector<nlohmann::json>* transcript = nullptr);

}  // namespace spdrag
