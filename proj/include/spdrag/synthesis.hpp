// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "spdrag/prompts.hpp"
#include "spdrag/providers.hpp"

namespace spdrag {

struct SummaryItem {
    std::string id;
    std::string text;
    std::size_t token_count = 0;
};

struct SummarySet {
    std::vector<SummaryItem> items;
    std::size_t iteration = 0;

    std::size_t size() const { return items.size(); }
};

SummarySet make_summary_set(const std::vector<std::pair<std::string, std::string>>& id_texts,
                            const TokenCounter& counter);

// One agglomeration step. Cluster ids: leaves are 0..n-1, step k creates
// cluster n+k, so the root is 2n-2.
struct MergeStep {
    std::size_t left_cluster = 0;
    std::size_t right_cluster = 0;
    double distance = 0.0;
    std::size_t new_cluster_id = 0;
};

struct MergeTree {
    std::size_t leaves = 0;
    std::vector<MergeStep> merges;  // non-decreasing distances
};

struct Batch {
    std::vector<std::size_t> members;  // positions in the summary set, ascending
    std::size_t total_tokens = 0;
    bool oversize = false;  // singleton whose sole member exceeds the budget
};

using DistanceMatrix = std::vector<std::vector<double>>;

// D_ij = 1 - cos(e_i, e_j) over one batched embedding call. Symmetric, zero
// diagonal, entries clamped to [0, 2].
DistanceMatrix distance_matrix(const SummarySet& summaries, EmbeddingProvider& embedder,
                               const TraceCtx& ctx);

// Average-linkage (UPGMA) agglomeration over a precomputed distance matrix.
// Each step joins the active pair with minimal average inter-cluster
// distance; ties pick the smallest (min id, then max id) pair.
MergeTree upgma(const DistanceMatrix& distances);

// Bottom-up budget cut: walk the merge steps in order keeping a partition;
// a step unions its two current groups iff their combined token count stays
// within budget, otherwise both groups are sealed as batches and the
// subtree above them is closed. A single summary over budget becomes its
// own batch flagged oversize.
std::vector<Batch> group_by_tokens(const SummarySet& summaries, const MergeTree& tree,
                                   std::size_t budget);

// One synthesis call over the concatenated member findings; the same
// template is used at every tree level including the last.
std::string synthesize_batch(const SummarySet& summaries, const Batch& batch,
                             const std::string& query, const std::string& directive,
                             ChatProvider& chat, const PromptLibrary& prompts,
                             const TraceCtx& ctx);

struct SynthesisOptions {
    std::size_t budget_b = 750000;
    bool singleton_synthesis = true;  // run one synthesis pass on n = 1 input
    double lane_base = 2000.0;        // simulated-clock base for this stage
    std::size_t max_workers = 8;
};

struct SynthesisResult {
    std::string summary;
    std::size_t iterations = 0;
    std::size_t synthesis_calls = 0;
    nlohmann::json merge_trace;  // per-iteration merges, batches, token totals
};

// Loop of embed -> cluster -> cut batches -> synthesize concurrently until a
// single summary remains. When a cut makes no progress the whole level is
// forced into one batch, which ends the loop on the next check.
SynthesisResult recursive_synthesis(const SummarySet& findings, const std::string& query,
                                    const std::string& directive,
                                    const ProviderSet& providers,
                                    const PromptLibrary& prompts,
                                    const SynthesisOptions& options);

}  // namespace spdrag
