// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <condition_variable>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spdrag/collection.hpp"
#include "spdrag/tokenizer.hpp"
#include "spdrag/trace.hpp"

namespace spdrag {

struct ChatRequest {
    std::string system_prompt;
    std::string user_content;
    double temperature = 0.0;
    // When set, the reply must parse as this structured object
    // ("write_todos" or "agent_action").
    std::optional<std::string> response_schema;
    Role model_role = Role::baseline;
};

struct ChatResponse {
    std::string text;
    std::optional<nlohmann::json> parsed;
    std::size_t input_tokens = 0;
    std::size_t output_tokens = 0;
    double latency_seconds = 0.0;
};

struct RerankResult {
    std::size_t original_position = 0;
    double relevance = 0.0;  // in [0, 1]
};

// Caps in-flight provider requests across all concurrent agents.
class RequestGate {
public:
    explicit RequestGate(std::size_t cap) : cap_(cap < 1 ? 1 : cap) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return in_flight_ < cap_; });
        ++in_flight_;
    }

    void release() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            --in_flight_;
        }
        cv_.notify_one();
    }

    struct Pass {
        explicit Pass(RequestGate* gate) : gate_(gate) {
            if (gate_) gate_->acquire();
        }
        ~Pass() {
            if (gate_) gate_->release();
        }
        Pass(const Pass&) = delete;
        Pass& operator=(const Pass&) = delete;

    private:
        RequestGate* gate_;
    };

private:
    std::size_t cap_;
    std::size_t in_flight_ = 0;
    std::mutex mutex_;
    std::condition_variable cv_;
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual ChatResponse chat(const ChatRequest& request, const TraceCtx& ctx) = 0;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::size_t dimension() const = 0;
    virtual std::vector<Embedding> embed(const std::vector<std::string>& texts,
                                         const TraceCtx& ctx) = 0;
};

class Reranker {
public:
    virtual ~Reranker() = default;
    // min(top_n, |candidates|) results sorted by relevance descending.
    virtual std::vector<RerankResult> rerank(const std::string& query,
                                             const std::vector<std::string>& candidates,
                                             std::size_t top_n, const TraceCtx& ctx) = 0;
};

class JudgeProvider {
public:
    virtual ~JudgeProvider() = default;
    // Integer score in [0, 100]; 100 is a perfect answer.
    virtual int judge(const std::string& question, const std::string& gold,
                      const std::string& predicted, const TraceCtx& ctx) = 0;
};

// Everything one pipeline run needs, sharing a trace sink and token counter.
struct ProviderSet {
    std::shared_ptr<ChatProvider> chat;
    std::shared_ptr<EmbeddingProvider> embedder;
    std::shared_ptr<Reranker> reranker;
    std::shared_ptr<JudgeProvider> judge;
    std::shared_ptr<TokenCounter> counter;
    std::shared_ptr<TraceSink> trace;
    bool simulated_clock = false;
};

}  // namespace spdrag
