// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "spdrag/config.hpp"
#include "spdrag/prompts.hpp"
#include "spdrag/providers.hpp"

namespace spdrag {

struct HttpResponse {
    int status = 0;
    std::string body;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse post_json(const std::string& url,
                                   const std::map<std::string, std::string>& headers,
                                   const std::string& body) = 0;
};

// cpp-httplib backed transport; constructed lazily so mock runs never touch it.
std::shared_ptr<Transport> make_httplib_transport(double timeout_seconds = 120.0);

using SleepFn = std::function<void(double /*milliseconds*/)>;

struct HttpProviderDeps {
    std::shared_ptr<Transport> transport;
    SleepFn sleep;  // injected so retry tests run without waiting
    std::shared_ptr<TokenCounter> counter;
    std::shared_ptr<TraceSink> trace;
    std::shared_ptr<RequestGate> gate;
};

// OpenAI-style /chat/completions client with bounded exponential backoff
// (transport failures and 429/5xx are retried up to retry.max_attempts).
// Every attempt appends one trace entry; failed attempts carry ok=false.
class HttpChatProvider final : public ChatProvider {
public:
    HttpChatProvider(ProviderConfig config, HttpProviderDeps deps);
    ChatResponse chat(const ChatRequest& request, const TraceCtx& ctx) override;

private:
    ProviderConfig config_;
    HttpProviderDeps deps_;
    std::string api_key_;
};

// Cohere-style /embed client.
class HttpEmbedder final : public EmbeddingProvider {
public:
    HttpEmbedder(ProviderConfig config, std::size_t dimension, HttpProviderDeps deps);
    std::size_t dimension() const override { return dimension_; }
    std::vector<Embedding> embed(const std::vector<std::string>& texts,
                                 const TraceCtx& ctx) override;

private:
    ProviderConfig config_;
    std::size_t dimension_;
    HttpProviderDeps deps_;
    std::string api_key_;
};

// Cohere-style /rerank client.
class HttpReranker final : public Reranker {
public:
    HttpReranker(ProviderConfig config, HttpProviderDeps deps);
    std::vector<RerankResult> rerank(const std::string& query,
                                     const std::vector<std::string>& candidates,
                                     std::size_t top_n, const TraceCtx& ctx) override;

private:
    ProviderConfig config_;
    HttpProviderDeps deps_;
    std::string api_key_;
};

// Judge on top of any chat backend: grade with the judge template, parse the
// integer score, re-ask once on an unparseable reply.
class ChatJudge final : public JudgeProvider {
public:
    ChatJudge(std::shared_ptr<ChatProvider> chat, std::string judge_template);
    int judge(const std::string& question, const std::string& gold,
              const std::string& predicted, const TraceCtx& ctx) override;

private:
    std::shared_ptr<ChatProvider> chat_;
    std::string template_;
};

// Reads the env var named in config; empty name means no key is sent.
std::string resolve_api_key(const ProviderConfig& config, const std::string& service);

ProviderSet make_http_providers(const Config& config, HttpProviderDeps deps);

}  // namespace spdrag
