// SPDX-License-Identifier: Apache-2.0
#include "spdrag/subagent.hpp"

#include <sstream>

#include "spdrag/error.hpp"
#include "spdrag/prompt_format.hpp"
#include "spdrag/strings.hpp"

namespace spdrag {

namespace {

constexpr double kTurnStride = 0.2;
constexpr double kEmbedOffset = 0.08;
constexpr double kRerankOffset = 0.12;

std::string chunk_ref(const Chunk& chunk) {
    return chunk.doc_id + "#" + std::to_string(chunk.seq);
}

std::string evidence_fallback(const std::vector<std::string>& evidence_blocks) {
    std::ostringstream out;
    for (const auto& block : evidence_blocks) out << block;
    return out.str();
}

}  // namespace

AgentAction AgentAction::from_json(const nlohmann::json& j) {
    AgentAction a;
    std::string kind = j.at("action").get<std::string>();
    if (kind == "search") {
        a.action = Kind::search;
        a.query = j.at("query").get<std::string>();
    } else if (kind == "finalize") {
        a.action = Kind::finalize;
        a.findings = j.at("findings").get<std::string>();
        a.relevance = j.at("relevance").get<double>();
    } else {
        throw validation_error("unknown agent action: " + kind);
    }
    if (j.contains("reasoning")) a.reasoning = j["reasoning"].get<std::string>();
    return a;
}

nlohmann::json Findings::to_json() const {
    nlohmann::json j{{"doc_id", doc_id},
                     {"summary", summary},
                     {"relevance", relevance},
                     {"searches_used", searches_used},
                     {"token_count", token_count}};
    if (error) j["error"] = *error;
    return j;
}

Findings Findings::from_json(const nlohmann::json& j) {
    Findings f;
    f.doc_id = j.at("doc_id").get<std::string>();
    f.summary = j.at("summary").get<std::string>();
    f.relevance = j.at("relevance").get<double>();
    f.searches_used = j.at("searches_used").get<std::size_t>();
    f.token_count = j.at("token_count").get<std::size_t>();
    if (j.contains("error")) f.error = j["error"].get<std::string>();
    return f;
}

std::vector<ScoredChunk> execute_search(const std::string& search_query,
                                        const Collection& collection,
                                        EmbeddingProvider& embedder, Reranker& reranker,
                                        const SubagentOptions& options, const TraceCtx& ctx) {
    if (trim(search_query).empty()) throw validation_error("search query must be non-empty");
    if (collection.empty()) return {};

    TraceCtx embed_ctx{ctx.role, ctx.label, ctx.logical_start + kEmbedOffset};
    Embedding query_embedding = embedder.embed({search_query}, embed_ctx).front();

    auto candidates = collection.search(query_embedding, options.retrieve_k);
    if (candidates.empty()) return {};

    std::vector<std::string> texts;
    texts.reserve(candidates.size());
    for (const auto& c : candidates) texts.push_back(c.chunk.text);

    TraceCtx rerank_ctx{ctx.role, ctx.label, ctx.logical_start + kRerankOffset};
    auto ranked = reranker.rerank(search_query, texts, options.rerank_top_n, rerank_ctx);

    std::vector<ScoredChunk> results;
    results.reserve(ranked.size());
    for (const auto& r : ranked) {
        results.push_back(ScoredChunk{candidates[r.original_position].chunk, r.relevance});
    }
    return results;
}

namespace {

Findings finalize_findings(const Document& doc, const AgentAction& action,
                           std::size_t searches_used, const TokenCounter* counter) {
    Findings f;
    f.doc_id = doc.id;
    f.summary = action.findings;
    f.relevance = action.relevance;
    f.searches_used = searches_used;
    f.token_count = counter ? counter->count(f.summary) : 0;
    return f;
}

}  // namespace

Findings run_agent_loop(const std::string& query, const std::string& scope_name,
                        const std::vector<std::string>& tasks, const Collection& collection,
                        const ProviderSet& providers, const std::string& system_prompt,
                        const SubagentOptions& options,
                        std::vector<nlohmann::json>* transcript) {
    Document scope;
    scope.id = collection.doc_id().empty() ? scope_name : collection.doc_id();
    scope.name = scope_name;

    std::vector<std::string> evidence_blocks;
    std::size_t searches_used = 0;

    auto record = [&](std::size_t turn, const AgentAction& action,
                      const std::vector<ScoredChunk>& retrieved) {
        if (!transcript) return;
        nlohmann::json entry{{"turn", turn}};
        if (action.action == AgentAction::Kind::search) {
            entry["action"] = "search";
            entry["query"] = action.query;
            auto ids = nlohmann::json::array();
            for (const auto& r : retrieved) ids.push_back(chunk_ref(r.chunk));
            entry["retrieved"] = ids;
        } else {
            entry["action"] = "finalize";
            entry["findings"] = action.findings;
        }
        transcript->push_back(std::move(entry));
    };

    auto agent_chat = [&](std::size_t turn, bool force_finalize) {
        ChatRequest request;
        request.system_prompt = system_prompt;
        request.user_content =
            promptfmt::agent_user_content(query, tasks, evidence_blocks, force_finalize);
        request.response_schema = "agent_action";
        request.model_role = options.role;
        TraceCtx ctx{options.role, options.label_prefix + ":" + scope.id + ":turn" +
                         std::to_string(turn),
                     options.lane_base + static_cast<double>(turn) * kTurnStride};
        return std::make_pair(providers.chat->chat(request, ctx), ctx);
    };

    auto run_search = [&](std::size_t turn, const AgentAction& action) {
        TraceCtx ctx{options.role, options.label_prefix + ":" + scope.id + ":turn" +
                         std::to_string(turn),
                     options.lane_base + static_cast<double>(turn) * kTurnStride};
        auto results = execute_search(action.query, collection, *providers.embedder,
                                      *providers.reranker, options, ctx);
        evidence_blocks.push_back(
            promptfmt::evidence_block(searches_used + 1, action.query, results));
        if (providers.trace) {
            auto ids = nlohmann::json::array();
            for (const auto& r : results) ids.push_back(chunk_ref(r.chunk));
            TraceEntry marker;
            marker.role = options.role;
            marker.kind = "retrieval";
            marker.label = ctx.label;
            marker.model = "-";
            marker.started_at = ctx.logical_start + kRerankOffset + 0.02;
            marker.finished_at = marker.started_at;
            marker.detail = nlohmann::json{{"query", action.query}, {"retrieved", ids}};
            providers.trace->append(std::move(marker));
        }
        record(turn, action, results);
        return results;
    };

    std::size_t turn = 0;
    try {
        for (; turn <= options.max_searches; ++turn) {
            auto [response, ctx] = agent_chat(turn, /*force_finalize=*/false);
            AgentAction action = AgentAction::from_json(*response.parsed);
            if (action.action == AgentAction::Kind::finalize) {
                record(turn, action, {});
                return finalize_findings(scope, action, searches_used,
                                         providers.counter.get());
            }
            if (searches_used >= options.max_searches) break;  // cap hit, force finalize next
            run_search(turn, action);
            ++searches_used;
        }

        // forced finalize: search is disabled; a refusal falls back to the
        // raw evidence with relevance 0.5
        std::size_t forced_turn = turn + 1;
        try {
            auto [response, ctx] = agent_chat(forced_turn, /*force_finalize=*/true);
            AgentAction action = AgentAction::from_json(*response.parsed);
            if (action.action == AgentAction::Kind::finalize) {
                record(forced_turn, action, {});
                return finalize_findings(scope, action, searches_used,
                                         providers.counter.get());
            }
        } catch (const Error&) {
            // fall through to the evidence fallback
        }
        Findings f;
        f.doc_id = scope.id;
        f.summary = evidence_fallback(evidence_blocks);
        if (f.summary.empty()) f.summary = "Not found in this document.";
        f.relevance = 0.5;
        f.searches_used = searches_used;
        f.token_count = providers.counter ? providers.counter->count(f.summary) : 0;
        return f;
    } catch (const Error& e) {
        // degraded continuation: keep whatever evidence was gathered
        Findings f;
        f.doc_id = scope.id;
        f.summary = "[agent-error] " + std::string(e.what()) + "\n" +
                    evidence_fallback(evidence_blocks);
        f.relevance = 0.0;
        f.searches_used = searches_used;
        f.token_count = providers.counter ? providers.counter->count(f.summary) : 0;
        f.error = e.what();
        return f;
    }
}

Findings run_subagent(const std::string& query, const Document& doc, const TodoPlan& plan,
                      const Collection& collection, const ProviderSet& providers,
                      const PromptLibrary& prompts, const SubagentOptions& options,
                      std::vector<nlohmann::json>* transcript) {
    if (!collection.doc_id().empty() && collection.doc_id() != doc.id) {
        throw validation_error("collection does not belong to document " + doc.id);
    }
    std::string system_prompt =
        interpolate(prompts.subagent, {{"file_name", doc.name.empty() ? doc.id : doc.name}});
    Findings findings = run_agent_loop(query, doc.name.empty() ? doc.id : doc.name,
                                       plan.sub_agent_todos, collection, providers,
                                       system_prompt, options, transcript);
    findings.doc_id = doc.id;
    return findings;
}

}  // namespace spdrag
