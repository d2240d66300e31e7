// SPDX-License-Identifier: Apache-2.0
#include "spdrag/provider_factory.hpp"

#include "spdrag/mock_providers.hpp"

namespace spdrag {

ProviderSet make_providers(const Config& config, std::shared_ptr<TraceSink> trace,
                           std::shared_ptr<RequestGate> gate,
                           std::shared_ptr<Transport> transport, SleepFn sleep) {
    if (!gate) gate = std::make_shared<RequestGate>(config.providers.request_cap);
    if (!trace) trace = std::make_shared<TraceSink>();

    if (config.providers.mode == "mock") {
        MockOptions options;
        options.seed = config.providers.seed;
        options.dimension = config.embedding.dimension;
        options.models = config.providers.models;
        options.embedding_model = config.providers.embedding_model;
        options.rerank_model = config.providers.rerank_model;
        auto judge_it = config.providers.models.find(Role::judge);
        if (judge_it != config.providers.models.end()) options.judge_model = judge_it->second;
        options.counter = make_token_counter(config.tokenizer);
        options.trace = std::move(trace);
        options.gate = std::move(gate);
        return make_mock_providers(options);
    }

    HttpProviderDeps deps;
    deps.transport = std::move(transport);
    deps.sleep = std::move(sleep);
    deps.counter = make_token_counter(config.tokenizer);
    deps.trace = std::move(trace);
    deps.gate = std::move(gate);
    return make_http_providers(config, deps);
}

}  // namespace spdrag
