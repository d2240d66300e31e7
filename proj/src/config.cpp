// SPDX-License-Identifier: Apache-2.0
#include "spdrag/config.hpp"

#include <fstream>

#include "spdrag/error.hpp"

namespace spdrag {

namespace {

const std::vector<Role> kModelRoles = {Role::coordinator, Role::subagent, Role::synthesizer,
                                       Role::judge, Role::baseline};

nlohmann::json pricing_to_json(const PricingTable& pricing) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [model, price] : pricing.models) {
        j[model] = {{"input_per_token", price.input_per_token},
                    {"output_per_token", price.output_per_token}};
    }
    return j;
}

PricingTable pricing_from_json(const nlohmann::json& j) {
    PricingTable table;
    for (auto it = j.begin(); it != j.end(); ++it) {
        ModelPrice price;
        price.input_per_token = it.value().value("input_per_token", 0.0);
        price.output_per_token = it.value().value("output_per_token", 0.0);
        table.models[it.key()] = price;
    }
    return table;
}

std::map<std::string, std::string> string_map_from_json(const nlohmann::json& j) {
    std::map<std::string, std::string> out;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value().get<std::string>();
    return out;
}

}  // namespace

Config Config::defaults() {
    Config c;
    c.providers.models = {
        {Role::coordinator, "gemini-2.5-pro"}, {Role::subagent, "gemini-2.5-flash"},
        {Role::synthesizer, "gemini-2.5-pro"}, {Role::judge, "gpt-5"},
        {Role::baseline, "gemini-2.5-pro"},
    };
    c.providers.api_key_env = {
        {"chat", "SPDRAG_CHAT_API_KEY"},
        {"embed", "SPDRAG_EMBED_API_KEY"},
        {"rerank", "SPDRAG_RERANK_API_KEY"},
        {"judge", "SPDRAG_JUDGE_API_KEY"},
    };
    c.providers.pricing.models = {
        {"gemini-2.5-pro", {1.25e-6, 1.0e-5}}, {"gemini-2.5-flash", {3.0e-7, 2.5e-6}},
        {"gpt-5", {1.25e-6, 1.0e-5}},          {"embed-v4.0", {1.2e-7, 0.0}},
        {"rerank-v4.0-fast", {5.0e-8, 0.0}},
    };
    return c;
}

nlohmann::json Config::to_json() const {
    nlohmann::json models = nlohmann::json::object();
    for (const auto& [role, model] : providers.models) models[role_name(role)] = model;
    return nlohmann::json{
        {"providers",
         {{"mode", providers.mode},
          {"seed", providers.seed},
          {"request_cap", providers.request_cap},
          {"retry",
           {{"max_attempts", providers.retry.max_attempts},
            {"initial_delay_ms", providers.retry.initial_delay_ms},
            {"multiplier", providers.retry.multiplier}}},
          {"endpoints", providers.endpoints},
          {"api_key_env", providers.api_key_env},
          {"models", models},
          {"embedding_model", providers.embedding_model},
          {"rerank_model", providers.rerank_model},
          {"pricing", pricing_to_json(providers.pricing)}}},
        {"tokenizer", tokenizer},
        {"chunking",
         {{"chunk_size", chunking.chunk_size}, {"chunk_overlap", chunking.chunk_overlap}}},
        {"embedding", {{"dimension", embedding.dimension}}},
        {"retrieval", {{"k", retrieval.k}, {"top_n", retrieval.top_n}}},
        {"synthesis",
         {{"budget_b", synthesis.budget_b},
          {"singleton_synthesis", synthesis.singleton_synthesis}}},
        {"limits",
         {{"subagent_max_searches", limits.subagent_max_searches},
          {"agentic_max_iters", limits.agentic_max_iters}}},
        {"eval",
         {{"normal_rag_k", eval.normal_rag_k},
          {"parallelism", eval.parallelism},
          {"context_cap_tokens", eval.context_cap_tokens}}},
        {"paths", {{"index_dir", paths.index_dir}, {"prompt_dir", paths.prompt_dir}}},
    };
}

Config Config::from_json(const nlohmann::json& j) {
    Config c = defaults();
    try {
        if (j.contains("providers")) {
            const auto& p = j["providers"];
            c.providers.mode = p.value("mode", c.providers.mode);
            c.providers.seed = p.value("seed", c.providers.seed);
            c.providers.request_cap = p.value("request_cap", c.providers.request_cap);
            if (p.contains("retry")) {
                const auto& r = p["retry"];
                c.providers.retry.max_attempts =
                    r.value("max_attempts", c.providers.retry.max_attempts);
                c.providers.retry.initial_delay_ms =
                    r.value("initial_delay_ms", c.providers.retry.initial_delay_ms);
                c.providers.retry.multiplier = r.value("multiplier", c.providers.retry.multiplier);
            }
            if (p.contains("endpoints")) c.providers.endpoints = string_map_from_json(p["endpoints"]);
            if (p.contains("api_key_env")) {
                c.providers.api_key_env = string_map_from_json(p["api_key_env"]);
            }
            if (p.contains("models")) {
                for (auto it = p["models"].begin(); it != p["models"].end(); ++it) {
                    bool known = false;
                    for (Role role : kModelRoles) {
                        if (role_name(role) == it.key()) {
                            c.providers.models[role] = it.value().get<std::string>();
                            known = true;
                            break;
                        }
                    }
                    if (!known) throw config_error("unknown model role: " + it.key());
                }
            }
            c.providers.embedding_model =
                p.value("embedding_model", c.providers.embedding_model);
            c.providers.rerank_model = p.value("rerank_model", c.providers.rerank_model);
            if (p.contains("pricing")) c.providers.pricing = pricing_from_json(p["pricing"]);
        }
        c.tokenizer = j.value("tokenizer", c.tokenizer);
        if (j.contains("chunking")) {
            c.chunking.chunk_size = j["chunking"].value("chunk_size", c.chunking.chunk_size);
            c.chunking.chunk_overlap =
                j["chunking"].value("chunk_overlap", c.chunking.chunk_overlap);
        }
        if (j.contains("embedding")) {
            c.embedding.dimension = j["embedding"].value("dimension", c.embedding.dimension);
        }
        if (j.contains("retrieval")) {
            c.retrieval.k = j["retrieval"].value("k", c.retrieval.k);
            c.retrieval.top_n = j["retrieval"].value("top_n", c.retrieval.top_n);
        }
        if (j.contains("synthesis")) {
            c.synthesis.budget_b = j["synthesis"].value("budget_b", c.synthesis.budget_b);
            c.synthesis.singleton_synthesis =
                j["synthesis"].value("singleton_synthesis", c.synthesis.singleton_synthesis);
        }
        if (j.contains("limits")) {
            c.limits.subagent_max_searches =
                j["limits"].value("subagent_max_searches", c.limits.subagent_max_searches);
            c.limits.agentic_max_iters =
                j["limits"].value("agentic_max_iters", c.limits.agentic_max_iters);
        }
        if (j.contains("eval")) {
            c.eval.normal_rag_k = j["eval"].value("normal_rag_k", c.eval.normal_rag_k);
            c.eval.parallelism = j["eval"].value("parallelism", c.eval.parallelism);
            c.eval.context_cap_tokens =
                j["eval"].value("context_cap_tokens", c.eval.context_cap_tokens);
        }
        if (j.contains("paths")) {
            c.paths.index_dir = j["paths"].value("index_dir", c.paths.index_dir);
            c.paths.prompt_dir = j["paths"].value("prompt_dir", c.paths.prompt_dir);
        }
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("malformed config: ") + e.what());
    }
    c.validate();
    return c;
}

Config Config::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config file " + path + " is not valid JSON: " + e.what());
    }
    return from_json(j);
}

void Config::apply_overrides(const std::vector<std::string>& overrides) {
    if (overrides.empty()) return;
    nlohmann::json j = to_json();
    for (const auto& entry : overrides) {
        std::size_t eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw usage_error("override must look like section.key=value: " + entry);
        }
        std::string path = entry.substr(0, eq);
        std::string raw = entry.substr(eq + 1);

        std::vector<std::string> parts;
        std::size_t pos = 0;
        while (pos <= path.size()) {
            std::size_t dot = path.find('.', pos);
            if (dot == std::string::npos) dot = path.size();
            parts.push_back(path.substr(pos, dot - pos));
            pos = dot + 1;
        }

        auto is_open_map = [](const std::string& name) {
            return name == "pricing" || name == "endpoints" || name == "api_key_env";
        };
        nlohmann::json* node = &j;
        bool inside_open_map = false;
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
            if (!node->contains(parts[i])) {
                if (inside_open_map) {
                    (*node)[parts[i]] = nlohmann::json::object();
                } else {
                    throw usage_error("unknown config section: " + parts[i] + " in " + entry);
                }
            }
            if (!(*node)[parts[i]].is_object()) {
                throw usage_error("not a config section: " + parts[i] + " in " + entry);
            }
            inside_open_map = inside_open_map || is_open_map(parts[i]);
            node = &(*node)[parts[i]];
        }
        const std::string& leaf = parts.back();
        if (!node->contains(leaf) && !inside_open_map) {
            throw usage_error("unknown config key: " + path);
        }
        nlohmann::json value = nlohmann::json::parse(raw, nullptr, /*allow_exceptions=*/false);
        if (value.is_discarded()) value = raw;  // plain string
        (*node)[leaf] = value;
    }
    *this = from_json(j);
}

void Config::validate() const {
    if (providers.mode != "mock" && providers.mode != "http") {
        throw config_error("providers.mode must be \"mock\" or \"http\"");
    }
    if (tokenizer != "whitespace" && tokenizer != "bpe") {
        throw config_error("tokenizer must be \"whitespace\" or \"bpe\"");
    }
    if (chunking.chunk_size < 1) throw config_error("chunking.chunk_size must be >= 1");
    if (chunking.chunk_overlap >= chunking.chunk_size) {
        throw config_error("chunking.chunk_overlap must be smaller than chunk_size");
    }
    if (embedding.dimension < 1) throw config_error("embedding.dimension must be >= 1");
    if (retrieval.k < 1) throw config_error("retrieval.k must be >= 1");
    if (retrieval.top_n < 1 || retrieval.top_n > retrieval.k) {
        throw config_error("retrieval.top_n must lie in [1, k]");
    }
    if (synthesis.budget_b < 1) throw config_error("synthesis.budget_b must be >= 1");
    if (limits.subagent_max_searches < 1) {
        throw config_error("limits.subagent_max_searches must be >= 1");
    }
    if (limits.agentic_max_iters < 1) throw config_error("limits.agentic_max_iters must be >= 1");
    if (eval.normal_rag_k < 1) throw config_error("eval.normal_rag_k must be >= 1");
    if (eval.parallelism < 1) throw config_error("eval.parallelism must be >= 1");
    if (providers.request_cap < 1) throw config_error("providers.request_cap must be >= 1");
    if (providers.retry.max_attempts < 1) {
        throw config_error("providers.retry.max_attempts must be >= 1");
    }
    for (const auto& [model, price] : providers.pricing.models) {
        if (price.input_per_token < 0.0 || price.output_per_token < 0.0) {
            throw config_error("negative price for model " + model);
        }
    }
}

}  // namespace spdrag
