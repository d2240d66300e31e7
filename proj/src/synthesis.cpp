// SPDX-License-Identifier: Apache-2.0
#include "spdrag/synthesis.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "spdrag/error.hpp"
#include "spdrag/parallel.hpp"
#include "spdrag/prompt_format.hpp"
#include "spdrag/strings.hpp"

namespace spdrag {

namespace {

constexpr double kIterationStride = 10.0;
constexpr double kBatchStride = 0.2;

}  // namespace

SummarySet make_summary_set(const std::vector<std::pair<std::string, std::string>>& id_texts,
                            const TokenCounter& counter) {
    SummarySet set;
    set.items.reserve(id_texts.size());
    for (const auto& [id, text] : id_texts) {
        set.items.push_back(SummaryItem{id, text, counter.count(text)});
    }
    return set;
}

DistanceMatrix distance_matrix(const SummarySet& summaries, EmbeddingProvider& embedder,
                               const TraceCtx& ctx) {
    if (summaries.size() < 2) throw validation_error("distance matrix needs >= 2 summaries");

    std::vector<std::string> texts;
    texts.reserve(summaries.size());
    for (const auto& item : summaries.items) {
        texts.push_back(item.text.empty() ? std::string("(empty)") : item.text);
    }
    auto embeddings = embedder.embed(texts, ctx);

    std::size_t n = summaries.size();
    DistanceMatrix d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dist = 1.0 - cosine_similarity(embeddings[i], embeddings[j]);
            dist = std::clamp(dist, 0.0, 2.0);
            d[i][j] = dist;
            d[j][i] = dist;
        }
    }
    return d;
}

MergeTree upgma(const DistanceMatrix& distances) {
    std::size_t n = distances.size();
    if (n < 2) throw validation_error("clustering needs >= 2 points");
    for (const auto& row : distances) {
        if (row.size() != n) throw validation_error("distance matrix must be square");
    }

    struct Cluster {
        std::size_t id;
        std::size_t size;
    };
    std::vector<Cluster> active;
    active.reserve(n);
    for (std::size_t i = 0; i < n; ++i) active.push_back({i, 1});

    // dist[a][b] between active clusters, updated by Lance-Williams averages
    std::vector<std::vector<double>> dist(2 * n - 1, std::vector<double>(2 * n - 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) dist[i][j] = distances[i][j];
    }

    MergeTree tree;
    tree.leaves = n;
    tree.merges.reserve(n - 1);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0;
        std::size_t bj = 1;
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                double d = dist[active[i].id][active[j].id];
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                } else if (d == best) {
                    std::size_t lo = std::min(active[i].id, active[j].id);
                    std::size_t hi = std::max(active[i].id, active[j].id);
                    std::size_t cur_lo = std::min(active[bi].id, active[bj].id);
                    std::size_t cur_hi = std::max(active[bi].id, active[bj].id);
                    if (lo < cur_lo || (lo == cur_lo && hi < cur_hi)) {
                        bi = i;
                        bj = j;
                    }
                }
            }
        }

        Cluster a = active[bi];
        Cluster b = active[bj];
        std::size_t new_id = n + step;

        MergeStep merge;
        merge.left_cluster = std::min(a.id, b.id);
        merge.right_cluster = std::max(a.id, b.id);
        merge.distance = best;
        merge.new_cluster_id = new_id;
        tree.merges.push_back(merge);

        for (const auto& c : active) {
            if (c.id == a.id || c.id == b.id) continue;
            double d = (static_cast<double>(a.size) * dist[a.id][c.id] +
                        static_cast<double>(b.size) * dist[b.id][c.id]) /
                       static_cast<double>(a.size + b.size);
            dist[new_id][c.id] = d;
            dist[c.id][new_id] = d;
        }

        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bi));
        active.push_back({new_id, a.size + b.size});
    }
    return tree;
}

std::vector<Batch> group_by_tokens(const SummarySet& summaries, const MergeTree& tree,
                                   std::size_t budget) {
    if (budget < 1) throw validation_error("token budget must be >= 1");
    std::size_t n = summaries.size();
    if (tree.leaves != n) throw validation_error("merge tree does not cover the summary set");

    struct Group {
        std::vector<std::size_t> members;
        std::size_t tokens = 0;
    };
    // state per cluster id: an open group, or closed (nullopt after sealing)
    std::vector<std::optional<Group>> state(n + tree.merges.size());
    for (std::size_t i = 0; i < n; ++i) {
        state[i] = Group{{i}, summaries.items[i].token_count};
    }

    std::vector<Batch> batches;
    auto seal = [&](Group& group) {
        Batch batch;
        batch.members = std::move(group.members);
        std::sort(batch.members.begin(), batch.members.end());
        batch.total_tokens = group.tokens;
        batch.oversize = batch.members.size() == 1 && batch.total_tokens > budget;
        batches.push_back(std::move(batch));
    };

    for (const auto& step : tree.merges) {
        auto& left = state[step.left_cluster];
        auto& right = state[step.right_cluster];
        if (left && right) {
            if (left->tokens + right->tokens <= budget) {
                Group merged;
                merged.members = std::move(left->members);
                merged.members.insert(merged.members.end(), right->members.begin(),
                                      right->members.end());
                merged.tokens = left->tokens + right->tokens;
                state[step.new_cluster_id] = std::move(merged);
            } else {
                seal(*left);
                seal(*right);
            }
        } else {
            if (left) seal(*left);
            if (right) seal(*right);
        }
        left.reset();
        right.reset();
    }

    std::size_t root = n == 1 ? 0 : n + tree.merges.size() - 1;
    if (state[root]) seal(*state[root]);
    return batches;
}

std::string synthesize_batch(const SummarySet& summaries, const Batch& batch,
                             const std::string& query, const std::string& directive,
                             ChatProvider& chat, const PromptLibrary& prompts,
                             const TraceCtx& ctx) {
    if (batch.members.empty()) throw validation_error("cannot synthesize an empty batch");

    std::string findings;
    for (std::size_t member : batch.members) {
        const auto& item = summaries.items.at(member);
        findings += promptfmt::findings_section(item.id, item.text);
    }

    ChatRequest request;
    request.system_prompt = "You are a research synthesizer.";
    request.user_content = interpolate(prompts.synthesis, {{"query", query},
                                                           {"synthesis_directive", directive},
                                                           {"findings", findings}});
    request.model_role = Role::synthesizer;

    ChatResponse response = chat.chat(request, ctx);
    if (trim(response.text).empty()) throw provider_error("synthesizer returned empty output");
    return response.text;
}

SynthesisResult recursive_synthesis(const SummarySet& findings, const std::string& query,
                                    const std::string& directive,
                                    const ProviderSet& providers,
                                    const PromptLibrary& prompts,
                                    const SynthesisOptions& options) {
    if (findings.items.empty()) throw validation_error("synthesis needs at least one finding");

    SynthesisResult result;
    result.merge_trace = nlohmann::json::array();

    SummarySet current = findings;

    if (current.size() == 1) {
        if (options.singleton_synthesis) {
            Batch all;
            all.members = {0};
            all.total_tokens = current.items[0].token_count;
            TraceCtx ctx{Role::synthesizer, "synthesis:i0:b0", options.lane_base + 1.0};
            result.summary = synthesize_batch(current, all, query, directive, *providers.chat,
                                              prompts, ctx);
            result.iterations = 1;
            result.synthesis_calls = 1;
        } else {
            result.summary = current.items[0].text;
        }
        return result;
    }

    while (current.size() > 1) {
        double iter_base =
            options.lane_base + static_cast<double>(result.iterations) * kIterationStride;
        TraceCtx embed_ctx{Role::synthesizer,
                           "synthesis:i" + std::to_string(result.iterations) + ":embed",
                           iter_base};
        DistanceMatrix d = distance_matrix(current, *providers.embedder, embed_ctx);
        MergeTree tree = upgma(d);
        std::vector<Batch> batches = group_by_tokens(current, tree, options.budget_b);

        bool forced = false;
        if (batches.size() >= current.size()) {
            Batch everything;
            everything.members.resize(current.size());
            for (std::size_t i = 0; i < current.size(); ++i) everything.members[i] = i;
            everything.total_tokens = 0;
            for (const auto& item : current.items) everything.total_tokens += item.token_count;
            batches.assign(1, std::move(everything));
            forced = true;
        }

        nlohmann::json iter_trace;
        iter_trace["iteration"] = result.iterations;
        iter_trace["summaries"] = current.size();
        iter_trace["forced_single_batch"] = forced;
        iter_trace["distance_matrix_hash"] = hex64(fnv1a64(nlohmann::json(d).dump()));
        auto& merges_json = iter_trace["merges"] = nlohmann::json::array();
        for (const auto& m : tree.merges) {
            merges_json.push_back({{"left", m.left_cluster},
                                   {"right", m.right_cluster},
                                   {"distance", m.distance},
                                   {"cluster", m.new_cluster_id}});
        }
        auto& batches_json = iter_trace["batches"] = nlohmann::json::array();
        for (const auto& b : batches) {
            auto ids = nlohmann::json::array();
            for (std::size_t member : b.members) ids.push_back(current.items[member].id);
            batches_json.push_back({{"member_ids", ids},
                                    {"total_tokens", b.total_tokens},
                                    {"oversize", b.oversize}});
        }
        result.merge_trace.push_back(std::move(iter_trace));

        std::vector<SummaryItem> next(batches.size());
        std::size_t iteration = result.iterations;
        parallel_for(batches.size(), options.max_workers, [&](std::size_t b) {
            TraceCtx ctx{Role::synthesizer,
                         "synthesis:i" + std::to_string(iteration) + ":b" + std::to_string(b),
                         iter_base + 1.0 + static_cast<double>(b) * kBatchStride};
            std::string text = synthesize_batch(current, batches[b], query, directive,
                                                *providers.chat, prompts, ctx);
            SummaryItem item;
            item.id = "t" + std::to_string(iteration + 1) + "_b" + std::to_string(b);
            item.text = std::move(text);
            item.token_count = providers.counter ? providers.counter->count(item.text) : 0;
            next[b] = std::move(item);
        });

        result.synthesis_calls += batches.size();
        ++result.iterations;
        current.items = std::move(next);
        current.iteration = result.iterations;
    }

    result.summary = current.items.front().text;
    return result;
}

}  // namespace spdrag
