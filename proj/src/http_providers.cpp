// SPDX-License-Identifier: Apache-2.0
#include "spdrag/http_providers.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "spdrag/error.hpp"
#include "spdrag/schema.hpp"
#include "spdrag/strings.hpp"

namespace spdrag {

namespace {

double wall_now() {
    using namespace std::chrono;
    return duration<double>(system_clock::now().time_since_epoch()).count();
}

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw config_error("endpoint is not a URL: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public Transport {
public:
    explicit HttplibTransport(double timeout_seconds) : timeout_seconds_(timeout_seconds) {}

    HttpResponse post_json(const std::string& url,
                           const std::map<std::string, std::string>& headers,
                           const std::string& body) override {
        SplitUrl split = split_url(url);
        httplib::Client client(split.origin);
        client.set_connection_timeout(std::chrono::duration<double>(timeout_seconds_));
        client.set_read_timeout(std::chrono::duration<double>(timeout_seconds_));
        httplib::Headers h;
        for (const auto& [key, value] : headers) h.emplace(key, value);
        auto result = client.Post(split.path, h, body, "application/json");
        if (!result) {
            throw provider_error("transport failure for " + url + ": " +
                                 httplib::to_string(result.error()));
        }
        return HttpResponse{result->status, result->body};
    }

private:
    double timeout_seconds_;
};

bool retryable_status(int status) { return status == 429 || status >= 500; }

// Runs one provider call with bounded exponential backoff. attempt_fn must
// throw provider_error on transport failure and return the parsed result on
// success; record_fn appends the per-attempt trace entry.
template <typename T>
T with_retries(const RetryPolicy& policy, const SleepFn& sleep,
               const std::function<T(std::size_t attempt)>& attempt_fn) {
    double delay = policy.initial_delay_ms;
    std::string last_error;
    for (std::size_t attempt = 1; attempt <= policy.max_attempts; ++attempt) {
        try {
            return attempt_fn(attempt);
        } catch (const Error& e) {
            last_error = e.what();
            if (attempt == policy.max_attempts) break;
            if (sleep) sleep(delay);
            delay *= policy.multiplier;
        }
    }
    throw provider_error("request failed after " + std::to_string(policy.max_attempts) +
                         " attempts: " + last_error);
}

std::string require_endpoint(const ProviderConfig& config, const std::string& service) {
    auto it = config.endpoints.find(service);
    if (it == config.endpoints.end() || it->second.empty()) {
        throw config_error("providers.endpoints." + service + " is required in http mode");
    }
    return it->second;
}

}  // namespace

std::shared_ptr<Transport> make_httplib_transport(double timeout_seconds) {
    return std::make_shared<HttplibTransport>(timeout_seconds);
}

std::string resolve_api_key(const ProviderConfig& config, const std::string& service) {
    auto it = config.api_key_env.find(service);
    if (it == config.api_key_env.end() || it->second.empty()) return "";
    const char* value = std::getenv(it->second.c_str());
    if (value == nullptr || *value == '\0') {
        throw config_error("environment variable " + it->second + " (api key for " + service +
                           ") is not set");
    }
    return value;
}

HttpChatProvider::HttpChatProvider(ProviderConfig config, HttpProviderDeps deps)
    : config_(std::move(config)), deps_(std::move(deps)) {
    api_key_ = resolve_api_key(config_, "chat");
}

ChatResponse HttpChatProvider::chat(const ChatRequest& request, const TraceCtx& ctx) {
    if (request.system_prompt.empty() || request.user_content.empty()) {
        throw validation_error("chat prompts must be non-empty");
    }
    RequestGate::Pass pass(deps_.gate.get());

    std::string model = "unknown";
    auto model_it = config_.models.find(request.model_role);
    if (model_it != config_.models.end()) model = model_it->second;

    nlohmann::json body{
        {"model", model},
        {"temperature", request.temperature},
        {"messages",
         {{{"role", "system"}, {"content", request.system_prompt}},
          {{"role", "user"}, {"content", request.user_content}}}},
    };
    if (request.response_schema) {
        body["response_format"] = {{"type", "json_object"}};
    }

    std::map<std::string, std::string> headers;
    if (!api_key_.empty()) headers["Authorization"] = "Bearer " + api_key_;
    std::string url = require_endpoint(config_, "chat");

    return with_retries<ChatResponse>(
        config_.retry, deps_.sleep, [&](std::size_t) -> ChatResponse {
            double started = wall_now();
            TraceEntry entry;
            entry.role = ctx.role;
            entry.kind = "chat";
            entry.label = ctx.label;
            entry.model = model;
            entry.started_at = started;
            try {
                HttpResponse http = deps_.transport->post_json(url, headers, body.dump());
                if (retryable_status(http.status)) {
                    throw provider_error("chat endpoint returned status " +
                                         std::to_string(http.status));
                }
                if (http.status != 200) {
                    throw provider_error("chat endpoint rejected the request (status " +
                                         std::to_string(http.status) + "): " + http.body);
                }
                nlohmann::json reply = nlohmann::json::parse(http.body);
                ChatResponse response;
                response.text =
                    reply.at("choices").at(0).at("message").at("content").get<std::string>();
                if (reply.contains("usage")) {
                    response.input_tokens = reply["usage"].value("prompt_tokens", 0);
                    response.output_tokens = reply["usage"].value("completion_tokens", 0);
                } else if (deps_.counter) {
                    response.input_tokens = deps_.counter->count(request.system_prompt) +
                                            deps_.counter->count(request.user_content);
                    response.output_tokens = deps_.counter->count(response.text);
                }
                double finished = wall_now();
                response.latency_seconds = finished - started;
                entry.input_tokens = response.input_tokens;
                entry.output_tokens = response.output_tokens;
                entry.latency_seconds = response.latency_seconds;
                entry.finished_at = finished;
                if (deps_.trace) deps_.trace->append(entry);
                return response;
            } catch (const Error& e) {
                entry.ok = false;
                entry.error = e.what();
                entry.finished_at = wall_now();
                entry.latency_seconds = entry.finished_at - started;
                if (deps_.trace) deps_.trace->append(entry);
                throw;
            } catch (const nlohmann::json::exception& e) {
                entry.ok = false;
                entry.error = std::string("bad chat response: ") + e.what();
                entry.finished_at = wall_now();
                if (deps_.trace) deps_.trace->append(entry);
                throw provider_error(entry.error);
            }
        });
}

HttpEmbedder::HttpEmbedder(ProviderConfig config, std::size_t dimension, HttpProviderDeps deps)
    : config_(std::move(config)), dimension_(dimension), deps_(std::move(deps)) {
    api_key_ = resolve_api_key(config_, "embed");
}

std::vector<Embedding> HttpEmbedder::embed(const std::vector<std::string>& texts,
                                           const TraceCtx& ctx) {
    if (texts.empty()) throw validation_error("embed requires at least one text");
    for (const auto& t : texts) {
        if (t.empty()) throw validation_error("cannot embed an empty text");
    }
    RequestGate::Pass pass(deps_.gate.get());

    nlohmann::json body{{"model", config_.embedding_model}, {"texts", texts}};
    std::map<std::string, std::string> headers;
    if (!api_key_.empty()) headers["Authorization"] = "Bearer " + api_key_;
    std::string url = require_endpoint(config_, "embed");

    return with_retries<std::vector<Embedding>>(
        config_.retry, deps_.sleep, [&](std::size_t) -> std::vector<Embedding> {
            double started = wall_now();
            TraceEntry entry;
            entry.role = ctx.role;
            entry.kind = "embed";
            entry.label = ctx.label;
            entry.model = config_.embedding_model;
            entry.started_at = started;
            if (deps_.counter) {
                for (const auto& t : texts) entry.input_tokens += deps_.counter->count(t);
            }
            try {
                HttpResponse http = deps_.transport->post_json(url, headers, body.dump());
                if (retryable_status(http.status)) {
                    throw provider_error("embed endpoint returned status " +
                                         std::to_string(http.status));
                }
                if (http.status != 200) {
                    throw provider_error("embed endpoint rejected the request (status " +
                                         std::to_string(http.status) + ")");
                }
                nlohmann::json reply = nlohmann::json::parse(http.body);
                std::vector<Embedding> out;
                for (const auto& vec : reply.at("embeddings")) {
                    auto values = vec.get<std::vector<double>>();
                    if (values.size() != dimension_) {
                        throw provider_error("embedding dimension mismatch: expected " +
                                             std::to_string(dimension_) + ", got " +
                                             std::to_string(values.size()));
                    }
                    out.push_back(make_embedding(std::move(values)));
                }
                if (out.size() != texts.size()) {
                    throw provider_error("embed endpoint returned a wrong number of vectors");
                }
                entry.finished_at = wall_now();
                entry.latency_seconds = entry.finished_at - started;
                if (deps_.trace) deps_.trace->append(entry);
                return out;
            } catch (const Error& e) {
                entry.ok = false;
                entry.error = e.what();
                entry.finished_at = wall_now();
                if (deps_.trace) deps_.trace->append(entry);
                throw;
            } catch (const nlohmann::json::exception& e) {
                entry.ok = false;
                entry.error = std::string("bad embed response: ") + e.what();
                entry.finished_at = wall_now();
                if (deps_.trace) deps_.trace->append(entry);
                throw provider_error(entry.error);
            }
        });
}

HttpReranker::HttpReranker(ProviderConfig config, HttpProviderDeps deps)
    : config_(std::move(config)), deps_(std::move(deps)) {
    api_key_ = resolve_api_key(config_, "rerank");
}

std::vector<RerankResult> HttpReranker::rerank(const std::string& query,
                                               const std::vector<std::string>& candidates,
                                               std::size_t top_n, const TraceCtx& ctx) {
    if (candidates.empty()) throw validation_error("rerank requires candidates");
    if (top_n < 1) throw validation_error("top_n must be >= 1");
    RequestGate::Pass pass(deps_.gate.get());

    nlohmann::json body{{"model", config_.rerank_model},
                        {"query", query},
                        {"documents", candidates},
                        {"top_n", top_n}};
    std::map<std::string, std::string> headers;
    if (!api_key_.empty()) headers["Authorization"] = "Bearer " + api_key_;
    std::string url = require_endpoint(config_, "rerank");

    return with_retries<std::vector<RerankResult>>(
        config_.retry, deps_.sleep, [&](std::size_t) -> std::vector<RerankResult> {
            double started = wall_now();
            TraceEntry entry;
            entry.role = ctx.role;
            entry.kind = "rerank";
            entry.label = ctx.label;
            entry.model = config_.rerank_model;
            entry.started_at = started;
            if (deps_.counter) {
                entry.input_tokens = deps_.counter->count(query);
                for (const auto& c : candidates) entry.input_tokens += deps_.counter->count(c);
            }
            try {
                HttpResponse http = deps_.transport->post_json(url, headers, body.dump());
                if (retryable_status(http.status)) {
                    throw provider_error("rerank endpoint returned status " +
                                         std::to_string(http.status));
                }
                if (http.status != 200) {
                    throw provider_error("rerank endpoint rejected the request (status " +
                                         std::to_string(http.status) + ")");
                }
                nlohmann::json reply = nlohmann::json::parse(http.body);
                std::vector<RerankResult> out;
                for (const auto& r : reply.at("results")) {
                    RerankResult item;
                    item.original_position = r.at("index").get<std::size_t>();
                    item.relevance = r.at("relevance_score").get<double>();
                    if (item.original_position >= candidates.size()) {
                        throw provider_error("rerank result index out of range");
                    }
                    out.push_back(item);
                }
                if (out.size() > top_n) out.resize(top_n);
                entry.finished_at = wall_now();
                entry.latency_seconds = entry.finished_at - started;
                if (deps_.trace) deps_.trace->append(entry);
                return out;
            } catch (const Error& e) {
                entry.ok = false;
                entry.error = e.what();
                entry.finished_at = wall_now();
                if (deps_.trace) deps_.trace->append(entry);
                throw;
            } catch (const nlohmann::json::exception& e) {
                entry.ok = false;
                entry.error = std::string("bad rerank response: ") + e.what();
                entry.finished_at = wall_now();
                if (deps_.trace) deps_.trace->append(entry);
                throw provider_error(entry.error);
            }
        });
}

ChatJudge::ChatJudge(std::shared_ptr<ChatProvider> chat, std::string judge_template)
    : chat_(std::move(chat)), template_(std::move(judge_template)) {}

namespace {

std::optional<int> parse_score(const std::string& text) {
    // accept the first bare integer in the reply
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::size_t end = i;
            while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) {
                ++end;
            }
            int value = std::stoi(text.substr(i, end - i));
            if (value >= 0 && value <= 100) return value;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace

int ChatJudge::judge(const std::string& question, const std::string& gold,
                     const std::string& predicted, const TraceCtx& ctx) {
    if (question.empty() || gold.empty() || predicted.empty()) {
        throw validation_error("judge requires non-empty question, gold and prediction");
    }
    ChatRequest request;
    request.system_prompt = "You are a strict grader.";
    request.user_content = interpolate(
        template_, {{"question", question}, {"gold", gold}, {"predicted", predicted}});
    request.model_role = Role::judge;

    ChatResponse response = chat_->chat(request, ctx);
    auto score = parse_score(response.text);
    if (score) return *score;

    ChatRequest retry = request;
    retry.user_content += "\n\nYour previous reply was not a bare integer. Reply with ONLY "
                          "the integer score between 0 and 100.";
    response = chat_->chat(retry, ctx);
    score = parse_score(response.text);
    if (score) return *score;
    throw provider_error("judge reply was not a score: " + response.text);
}

ProviderSet make_http_providers(const Config& config, HttpProviderDeps deps) {
    if (!deps.transport) deps.transport = make_httplib_transport();
    if (!deps.sleep) {
        deps.sleep = [](double ms) {
            std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(ms));
        };
    }
    if (!deps.counter) deps.counter = make_token_counter(config.tokenizer);
    if (!deps.trace) deps.trace = std::make_shared<TraceSink>();
    if (!deps.gate) deps.gate = std::make_shared<RequestGate>(config.providers.request_cap);

    ProviderSet set;
    auto chat = std::make_shared<HttpChatProvider>(config.providers, deps);
    set.chat = std::make_shared<SchemaValidatingChat>(chat);
    set.embedder =
        std::make_shared<HttpEmbedder>(config.providers, config.embedding.dimension, deps);
    set.reranker = std::make_shared<HttpReranker>(config.providers, deps);
    set.judge = std::make_shared<ChatJudge>(set.chat,
                                            PromptLibrary::load(config.paths.prompt_dir).judge);
    set.counter = deps.counter;
    set.trace = deps.trace;
    set.simulated_clock = false;
    return set;
}

}  // namespace spdrag
