// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "spdrag/providers.hpp"

namespace spdrag {

// Deterministic stand-ins for the external services. Every mock is a pure
// function of (seed, request); repeated runs with the same seed produce
// byte-identical traces and outputs.

struct MockOptions {
    std::uint64_t seed = 42;
    std::size_t dimension = 1536;
    std::map<Role, std::string> models;  // role -> model name used in trace entries
    std::string embedding_model = "embed-v4.0";
    std::string rerank_model = "rerank-v4.0-fast";
    std::string judge_model = "gpt-5";
    std::shared_ptr<TokenCounter> counter;
    std::shared_ptr<TraceSink> trace;
    std::shared_ptr<RequestGate> gate;
};

// Seeded hash-derived unit vector per distinct text, cached for the life of
// the provider so cosine structure is stable across a run.
class MockEmbedder final : public EmbeddingProvider {
public:
    explicit MockEmbedder(MockOptions options);

    std::size_t dimension() const override { return options_.dimension; }
    std::vector<Embedding> embed(const std::vector<std::string>& texts,
                                 const TraceCtx& ctx) override;

    Embedding embedding_for(const std::string& text);

private:
    MockOptions options_;
    std::mutex mutex_;
    std::unordered_map<std::string, Embedding> cache_;
};

// Relevance = |query words ∩ candidate words| / |query words| over
// lowercased alphanumeric words; ties keep the original candidate order.
class MockReranker final : public Reranker {
public:
    explicit MockReranker(MockOptions options) : options_(std::move(options)) {}

    std::vector<RerankResult> rerank(const std::string& query,
                                     const std::vector<std::string>& candidates,
                                     std::size_t top_n, const TraceCtx& ctx) override;

private:
    MockOptions options_;
};

// Score = 100 * (gold key-fact words covered by the prediction / total gold
// key-fact words), where key-fact words are the deduplicated, lowercased
// alphanumeric words of the gold answer minus a small stopword list.
class MockJudge final : public JudgeProvider {
public:
    explicit MockJudge(MockOptions options) : options_(std::move(options)) {}

    int judge(const std::string& question, const std::string& gold,
              const std::string& predicted, const TraceCtx& ctx) override;

    static std::vector<std::string> key_fact_words(const std::string& gold);

private:
    MockOptions options_;
};

// Role-aware template responder. Coordinator requests yield a fixed todo
// plan derived from the query; agent requests follow a
// search/search/finalize policy over the evidence blocks in the prompt;
// synthesizer and baseline requests echo the findings / context sections so
// coverage is preserved end to end.
class MockChatProvider final : public ChatProvider {
public:
    explicit MockChatProvider(MockOptions options) : options_(std::move(options)) {}

    ChatResponse chat(const ChatRequest& request, const TraceCtx& ctx) override;

private:
    std::string render(const ChatRequest& request) const;

    MockOptions options_;
};

// Replays a fixed script of raw reply texts; used to drive edge cases such
// as over-searching agents and malformed structured output.
class ScriptedChatProvider final : public ChatProvider {
public:
    ScriptedChatProvider(MockOptions options, std::vector<std::string> script,
                         bool repeat_last = true);

    ChatResponse chat(const ChatRequest& request, const TraceCtx& ctx) override;

    std::size_t calls() const;

private:
    MockOptions options_;
    mutable std::mutex mutex_;
    std::deque<std::string> script_;
    std::string last_;
    bool repeat_last_;
    std::size_t calls_ = 0;
};

// Assembles the full mock provider set shared by tests and --mock runs.
ProviderSet make_mock_providers(const MockOptions& options);

}  // namespace spdrag
