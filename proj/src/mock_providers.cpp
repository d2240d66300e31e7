// SPDX-License-Identifier: Apache-2.0
#include "spdrag/mock_providers.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "spdrag/error.hpp"
#include "spdrag/prompt_format.hpp"
#include "spdrag/schema.hpp"
#include "spdrag/strings.hpp"

namespace spdrag {

namespace {

constexpr double kChatLatency = 0.05;
constexpr double kEmbedLatency = 0.01;
constexpr double kRerankLatency = 0.01;
constexpr double kJudgeLatency = 0.02;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

TraceEntry base_entry(const MockOptions& options, const TraceCtx& ctx, std::string kind,
                      std::string model, double latency) {
    TraceEntry e;
    e.role = ctx.role;
    e.kind = std::move(kind);
    e.label = ctx.label;
    e.model = std::move(model);
    e.latency_seconds = latency;
    e.started_at = ctx.logical_start;  // mocks run on the simulated clock
    e.finished_at = e.started_at + latency;
    (void)options;
    return e;
}

std::string model_for_role(const MockOptions& options, Role role) {
    auto it = options.models.find(role);
    if (it != options.models.end()) return it->second;
    return "mock-model";
}

const std::set<std::string>& stopwords() {
    static const std::set<std::string> words = {
        "a",    "an",  "and", "are", "as",  "at",   "be",  "by",  "for", "from",
        "in",   "is",  "it",  "its", "of",  "on",   "or",  "that", "the", "their",
        "this", "to",  "was", "were", "with"};
    return words;
}

}  // namespace

MockEmbedder::MockEmbedder(MockOptions options) : options_(std::move(options)) {
    if (options_.dimension < 1) throw config_error("embedding dimension must be >= 1");
}

Embedding MockEmbedder::embedding_for(const std::string& text) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(text);
        if (it != cache_.end()) return it->second;
    }
    std::uint64_t state = options_.seed ^ fnv1a64(text);
    std::vector<double> values(options_.dimension);
    for (auto& v : values) {
        v = static_cast<double>(splitmix64(state)) / 18446744073709551616.0 * 2.0 - 1.0;
    }
    double sq = 0.0;
    for (double v : values) sq += v * v;
    if (sq == 0.0) values[0] = 1.0;  // vanishing chance, but keep the norm positive
    double norm = std::sqrt(sq == 0.0 ? 1.0 : sq);
    for (auto& v : values) v /= norm;
    Embedding e = make_embedding(std::move(values));
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(text, std::move(e)).first->second;
}

std::vector<Embedding> MockEmbedder::embed(const std::vector<std::string>& texts,
                                           const TraceCtx& ctx) {
    if (texts.empty()) throw validation_error("embed requires at least one text");
    RequestGate::Pass pass(options_.gate.get());
    std::vector<Embedding> out;
    out.reserve(texts.size());
    std::size_t tokens = 0;
    for (const auto& text : texts) {
        if (text.empty()) throw validation_error("cannot embed an empty text");
        tokens += options_.counter ? options_.counter->count(text) : 0;
        out.push_back(embedding_for(text));
    }
    if (options_.trace) {
        TraceEntry e = base_entry(options_, ctx, "embed", options_.embedding_model,
                                  kEmbedLatency);
        e.input_tokens = tokens;
        options_.trace->append(std::move(e));
    }
    return out;
}

std::vector<RerankResult> MockReranker::rerank(const std::string& query,
                                               const std::vector<std::string>& candidates,
                                               std::size_t top_n, const TraceCtx& ctx) {
    if (candidates.empty()) throw validation_error("rerank requires candidates");
    if (top_n < 1) throw validation_error("top_n must be >= 1");
    RequestGate::Pass pass(options_.gate.get());

    auto qwords_vec = normalized_words(query);
    std::set<std::string> qwords(qwords_vec.begin(), qwords_vec.end());

    std::vector<RerankResult> scored;
    scored.reserve(candidates.size());
    std::size_t tokens = options_.counter ? options_.counter->count(query) : 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        tokens += options_.counter ? options_.counter->count(candidates[i]) : 0;
        auto cwords_vec = normalized_words(candidates[i]);
        std::set<std::string> cwords(cwords_vec.begin(), cwords_vec.end());
        std::size_t hit = 0;
        for (const auto& w : qwords) hit += cwords.count(w);
        double relevance = qwords.empty() ? 0.0
                                          : static_cast<double>(hit) /
                                                static_cast<double>(qwords.size());
        scored.push_back(RerankResult{i, relevance});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.relevance > b.relevance;
    });
    if (scored.size() > top_n) scored.resize(top_n);

    if (options_.trace) {
        TraceEntry e = base_entry(options_, ctx, "rerank", options_.rerank_model,
                                  kRerankLatency);
        e.input_tokens = tokens;
        options_.trace->append(std::move(e));
    }
    return scored;
}

std::vector<std::string> MockJudge::key_fact_words(const std::string& gold) {
    std::vector<std::string> words = normalized_words(gold);
    std::set<std::string> seen;
    std::vector<std::string> out;
    for (auto& w : words) {
        if (stopwords().count(w)) continue;
        if (seen.insert(w).second) out.push_back(std::move(w));
    }
    if (out.empty()) {
        // gold made only of stopwords: fall back to all its words
        seen.clear();
        for (auto& w : normalized_words(gold)) {
            if (seen.insert(w).second) out.push_back(std::move(w));
        }
    }
    return out;
}

int MockJudge::judge(const std::string& question, const std::string& gold,
                     const std::string& predicted, const TraceCtx& ctx) {
    if (question.empty() || gold.empty() || predicted.empty()) {
        throw validation_error("judge requires non-empty question, gold and prediction");
    }
    RequestGate::Pass pass(options_.gate.get());

    auto facts = key_fact_words(gold);
    auto pred_vec = normalized_words(predicted);
    std::set<std::string> pred(pred_vec.begin(), pred_vec.end());
    std::size_t covered = 0;
    for (const auto& w : facts) covered += pred.count(w);
    int score = facts.empty()
                    ? 0
                    : static_cast<int>(std::lround(100.0 * static_cast<double>(covered) /
                                                   static_cast<double>(facts.size())));

    if (options_.trace) {
        TraceEntry e = base_entry(options_, ctx, "judge", options_.judge_model, kJudgeLatency);
        if (options_.counter) {
            e.input_tokens = options_.counter->count(question) +
                             options_.counter->count(gold) +
                             options_.counter->count(predicted);
        }
        e.output_tokens = 1;
        options_.trace->append(std::move(e));
    }
    return score;
}

std::string MockChatProvider::render(const ChatRequest& request) const {
    const std::string& user = request.user_content;

    if (request.response_schema && *request.response_schema == "write_todos") {
        std::string query = trim(user);
        nlohmann::json plan{
            {"sub_agent_todos",
             {"Extract every fact, figure, or statement relevant to: " + query,
              "Extract every numeric value, name, and date related to: " + query,
              "Record any constraints, caveats, or counterpoints related to: " + query}},
            {"synthesis_directive",
             "Merge the findings into one direct answer to the query. Preserve exact "
             "numbers, names, and dates from the findings. Remove redundant or "
             "tangential material."}};
        return plan.dump();
    }

    if (request.response_schema && *request.response_schema == "agent_action") {
        auto tasks = promptfmt::parse_tasks(user);
        std::size_t searches = promptfmt::count_search_blocks(user);
        bool forced = promptfmt::has_forced_finalize(user);

        if (!forced && searches < 2) {
            std::string query;
            if (!tasks.empty()) {
                query = tasks[std::min(searches, tasks.size() - 1)];
            } else {
                std::size_t head = user.find("User query:\n");
                std::size_t end = user.find("\n\n", head == std::string::npos ? 0 : head);
                query = head == std::string::npos
                            ? trim(user)
                            : trim(user.substr(head + 12, end - head - 12));
            }
            nlohmann::json action{{"action", "search"},
                                  {"query", query},
                                  {"reasoning", "gathering evidence for the assigned tasks"}};
            return action.dump();
        }

        auto evidence = promptfmt::parse_evidence_texts(user);
        std::vector<std::string> distinct;
        for (const auto& text : evidence) {
            if (std::find(distinct.begin(), distinct.end(), text) == distinct.end()) {
                distinct.push_back(text);
            }
        }

        std::ostringstream findings;
        std::size_t found = 0;
        std::vector<bool> used(distinct.size(), false);
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            auto twords_vec = normalized_words(tasks[t]);
            std::set<std::string> twords(twords_vec.begin(), twords_vec.end());
            std::size_t best = distinct.size();
            std::size_t best_overlap = 0;
            for (std::size_t i = 0; i < distinct.size(); ++i) {
                auto cwords = normalized_words(distinct[i]);
                std::size_t overlap = 0;
                for (const auto& w : cwords) overlap += twords.count(w);
                if (overlap > best_overlap) {
                    best_overlap = overlap;
                    best = i;
                }
            }
            if (best < distinct.size()) {
                findings << "Task " << (t + 1) << ": Found: " << distinct[best] << "\n";
                used[best] = true;
                ++found;
            } else {
                findings << "Task " << (t + 1) << ": Not found in this document.\n";
            }
        }
        std::ostringstream extra;
        for (std::size_t i = 0; i < distinct.size(); ++i) {
            if (!used[i]) extra << distinct[i] << "\n";
        }
        if (!extra.str().empty()) {
            findings << "Additional evidence:\n" << extra.str();
        }
        std::string report = findings.str();
        if (report.empty()) report = "Not found in this document.";

        double relevance;
        if (tasks.empty()) {
            relevance = distinct.empty() ? 0.0 : 1.0;
        } else {
            relevance = static_cast<double>(found) / static_cast<double>(tasks.size());
        }
        nlohmann::json action{{"action", "finalize"},
                              {"findings", report},
                              {"relevance", relevance},
                              {"reasoning", "all assigned tasks were checked against the "
                                            "retrieved evidence"}};
        return action.dump();
    }

    if (request.model_role == Role::synthesizer) {
        auto sections = promptfmt::parse_findings_sections(user);
        std::ostringstream out;
        out << "Merged findings:\n";
        for (const auto& [id, text] : sections) {
            out << "[From " << id << "]\n" << text << "\n";
        }
        if (sections.empty()) out << user << "\n";
        return out.str();
    }

    // baseline answerer: extractive echo of every context section
    auto contexts = promptfmt::parse_context_texts(user);
    std::ostringstream out;
    out << "Answer assembled from the provided context:\n";
    for (const auto& text : contexts) out << text << "\n";
    if (contexts.empty()) out << "No context was provided.\n";
    return out.str();
}

ChatResponse MockChatProvider::chat(const ChatRequest& request, const TraceCtx& ctx) {
    if (request.system_prompt.empty() || request.user_content.empty()) {
        throw validation_error("chat prompts must be non-empty");
    }
    RequestGate::Pass pass(options_.gate.get());

    ChatResponse response;
    response.text = render(request);
    response.latency_seconds = kChatLatency;
    if (options_.counter) {
        response.input_tokens = options_.counter->count(request.system_prompt) +
                                options_.counter->count(request.user_content);
        response.output_tokens = options_.counter->count(response.text);
    }

    if (options_.trace) {
        TraceEntry e = base_entry(options_, ctx, "chat",
                                  model_for_role(options_, request.model_role), kChatLatency);
        e.input_tokens = response.input_tokens;
        e.output_tokens = response.output_tokens;
        options_.trace->append(std::move(e));
    }
    return response;
}

ScriptedChatProvider::ScriptedChatProvider(MockOptions options, std::vector<std::string> script,
                                           bool repeat_last)
    : options_(std::move(options)), script_(script.begin(), script.end()),
      repeat_last_(repeat_last) {
    if (script_.empty()) throw validation_error("scripted provider needs a script");
    last_ = script_.back();
}

ChatResponse ScriptedChatProvider::chat(const ChatRequest& request, const TraceCtx& ctx) {
    std::string text;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        ++calls_;
        if (!script_.empty()) {
            text = script_.front();
            script_.pop_front();
        } else if (repeat_last_) {
            text = last_;
        } else {
            throw provider_error("scripted provider ran out of replies");
        }
    }
    ChatResponse response;
    response.text = text;
    response.latency_seconds = kChatLatency;
    if (options_.counter) {
        response.input_tokens = options_.counter->count(request.system_prompt) +
                                options_.counter->count(request.user_content);
        response.output_tokens = options_.counter->count(response.text);
    }
    if (options_.trace) {
        TraceEntry e = base_entry(options_, ctx, "chat",
                                  model_for_role(options_, request.model_role), kChatLatency);
        e.input_tokens = response.input_tokens;
        e.output_tokens = response.output_tokens;
        options_.trace->append(std::move(e));
    }
    return response;
}

std::size_t ScriptedChatProvider::calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_;
}

ProviderSet make_mock_providers(const MockOptions& options) {
    MockOptions opts = options;
    if (!opts.counter) opts.counter = std::make_shared<WhitespaceTokenCounter>();
    if (!opts.trace) opts.trace = std::make_shared<TraceSink>();
    if (!opts.gate) opts.gate = std::make_shared<RequestGate>(8);

    ProviderSet set;
    set.chat = std::make_shared<SchemaValidatingChat>(std::make_shared<MockChatProvider>(opts));
    set.embedder = std::make_shared<MockEmbedder>(opts);
    set.reranker = std::make_shared<MockReranker>(opts);
    set.judge = std::make_shared<MockJudge>(opts);
    set.counter = opts.counter;
    set.trace = opts.trace;
    set.simulated_clock = true;
    return set;
}

}  // namespace spdrag
