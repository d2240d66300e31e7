// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "spdrag/trace.hpp"

namespace spdrag {

struct RetryPolicy {
    std::size_t max_attempts = 3;
    double initial_delay_ms = 200.0;
    double multiplier = 4.0;
};

struct ProviderConfig {
    std::string mode = "mock";  // "mock" | "http"
    std::uint64_t seed = 42;
    std::size_t request_cap = 8;
    RetryPolicy retry;
    std::map<std::string, std::string> endpoints;    // chat/embed/rerank/judge -> URL
    std::map<std::string, std::string> api_key_env;  // chat/embed/rerank/judge -> env var NAME
    std::map<Role, std::string> models;
    std::string embedding_model = "embed-v4.0";
    std::string rerank_model = "rerank-v4.0-fast";
    PricingTable pricing;
};

struct Config {
    ProviderConfig providers;
    std::string tokenizer = "whitespace";  // "whitespace" | "bpe"

    struct {
        std::size_t chunk_size = 1000;
        std::size_t chunk_overlap = 250;
    } chunking;

    struct {
        std::size_t dimension = 1536;
    } embedding;

    struct {
        std::size_t k = 15;
        std::size_t top_n = 5;
    } retrieval;

    struct {
        std::size_t budget_b = 750000;
        bool singleton_synthesis = true;
    } synthesis;

    struct {
        std::size_t subagent_max_searches = 5;
        std::size_t agentic_max_iters = 10;
    } limits;

    struct {
        std::size_t normal_rag_k = 15;
        std::size_t parallelism = 4;
        std::size_t context_cap_tokens = 1000000;
    } eval;

    struct {
        std::string index_dir = "index";
        std::string prompt_dir;
    } paths;

    static Config defaults();
    static Config from_json(const nlohmann::json& j);
    static Config load_file(const std::string& path);

    nlohmann::json to_json() const;

    // Applies "dotted.key=value" overrides (flag > file > default), then
    // re-validates. Unknown keys are an error.
    void apply_overrides(const std::vector<std::string>& overrides);

    void validate() const;
};

}  // namespace spdrag
