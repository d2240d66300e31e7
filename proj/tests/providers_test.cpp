// SPDX-License-Identifier: Apache-2.0
#include "spdrag/providers.hpp"

#include <atomic>
#include <thread>

#include "doctest.h"
#include "spdrag/error.hpp"
#include "spdrag/http_providers.hpp"
#include "spdrag/mock_providers.hpp"
#include "spdrag/provider_factory.hpp"
#include "spdrag/schema.hpp"
#include "testutil.hpp"

using namespace spdrag;

namespace {

ChatRequest simple_request(Role role = Role::baseline) {
    ChatRequest r;
    r.system_prompt = "system prompt";
    r.user_content = "User query:\nwhat is the total revenue\n\n[Context doc=a]\nthe total "
                     "revenue was 12 million\n[End context]\n";
    r.model_role = role;
    return r;
}

// Counts transport hits and replays scripted responses.
class ScriptedTransport final : public Transport {
public:
    explicit ScriptedTransport(std::vector<HttpResponse> responses)
        : responses_(std::move(responses)) {}

    HttpResponse post_json(const std::string&, const std::map<std::string, std::string>&,
                           const std::string& body) override {
        last_body = body;
        ++calls;
        if (calls_fail_first > 0 && calls <= calls_fail_first) {
            throw provider_error("connection refused");
        }
        if (responses_.empty()) throw provider_error("no scripted response left");
        HttpResponse r = responses_.front();
        if (responses_.size() > 1) responses_.erase(responses_.begin());
        return r;
    }

    int calls = 0;
    int calls_fail_first = 0;
    std::string last_body;

private:
    std::vector<HttpResponse> responses_;
};

class PoisonedTransport final : public Transport {
public:
    HttpResponse post_json(const std::string&, const std::map<std::string, std::string>&,
                           const std::string&) override {
        hits.fetch_add(1);
        throw provider_error("network access attempted in mock mode");
    }
    std::atomic<int> hits{0};
};

}  // namespace

TEST_CASE("mock chat is deterministic for identical requests") {
    auto a = testutil::mock_providers(7);
    auto b = testutil::mock_providers(7);
    auto ra = a.chat->chat(simple_request(), TraceCtx{Role::baseline, "x", 1.0});
    auto rb = b.chat->chat(simple_request(), TraceCtx{Role::baseline, "x", 1.0});
    CHECK(ra.text == rb.text);
    CHECK(ra.input_tokens == rb.input_tokens);
    CHECK(ra.output_tokens == rb.output_tokens);
}

TEST_CASE("mock token accounting equals whitespace word counts") {
    auto providers = testutil::mock_providers();
    WhitespaceTokenCounter words;
    auto request = simple_request();
    auto response = providers.chat->chat(request, TraceCtx{Role::baseline, "x", 1.0});
    CHECK(response.input_tokens ==
          words.count(request.system_prompt) + words.count(request.user_content));
    CHECK(response.output_tokens == words.count(response.text));

    auto entries = providers.trace->snapshot();
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].input_tokens == response.input_tokens);
    CHECK(entries[0].output_tokens == response.output_tokens);
}

TEST_CASE("schema violations trigger exactly one re-ask, then a hard error") {
    auto base = testutil::mock_providers();
    auto options = testutil::mock_options(base);

    SUBCASE("re-ask recovers") {
        auto scripted = std::make_shared<ScriptedChatProvider>(
            options,
            std::vector<std::string>{
                "this is not json at all",
                R"({"action": "finalize", "findings": "Found: x", "relevance": 0.5})"},
            /*repeat_last=*/false);
        SchemaValidatingChat chat(scripted);
        ChatRequest request = simple_request(Role::subagent);
        request.response_schema = "agent_action";
        auto response = chat.chat(request, TraceCtx{Role::subagent, "x", 1.0});
        REQUIRE(response.parsed.has_value());
        CHECK(scripted->calls() == 2);
    }

    SUBCASE("second failure is fatal") {
        auto scripted = std::make_shared<ScriptedChatProvider>(
            options, std::vector<std::string>{"garbage", "more garbage"},
            /*repeat_last=*/false);
        SchemaValidatingChat chat(scripted);
        ChatRequest request = simple_request(Role::subagent);
        request.response_schema = "agent_action";
        CHECK_THROWS_AS(chat.chat(request, TraceCtx{Role::subagent, "x", 1.0}), Error);
        CHECK(scripted->calls() == 2);
    }
}

TEST_CASE("schema validation enforces the action variants") {
    CHECK(validate_schema("agent_action",
                          nlohmann::json{{"action", "search"}, {"query", "q"}}) ==
          std::nullopt);
    // search must not carry findings
    CHECK(validate_schema("agent_action", nlohmann::json{{"action", "search"},
                                                         {"query", "q"},
                                                         {"findings", "x"}}) != std::nullopt);
    // finalize needs findings and an in-range relevance
    CHECK(validate_schema("agent_action", nlohmann::json{{"action", "finalize"},
                                                         {"findings", "f"},
                                                         {"relevance", 0.4}}) == std::nullopt);
    CHECK(validate_schema("agent_action", nlohmann::json{{"action", "finalize"},
                                                         {"findings", "f"},
                                                         {"relevance", 1.5}}) != std::nullopt);
    CHECK(validate_schema("write_todos",
                          nlohmann::json{{"sub_agent_todos", nlohmann::json::array()},
                                         {"synthesis_directive", "d"}}) != std::nullopt);
}

TEST_CASE("mock embeddings are unit vectors, cached, and order preserving") {
    auto providers = testutil::mock_providers();
    auto out = providers.embedder->embed({"one", "two", "one"},
                                         TraceCtx{Role::ingest, "t", 0.0});
    REQUIRE(out.size() == 3);
    for (const auto& e : out) {
        CHECK(e.dimension() == 32);
        CHECK(e.norm == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(out[0].values == out[2].values);
    CHECK(out[0].values != out[1].values);
    CHECK(cosine_similarity(out[0], out[2]) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(providers.embedder->embed({}, TraceCtx{}), Error);
    CHECK_THROWS_AS(providers.embedder->embed({""}, TraceCtx{}), Error);
}

TEST_CASE("mock reranker orders by query-token overlap") {
    auto providers = testutil::mock_providers();
    std::vector<std::string> candidates = {
        "nothing relevant here",
        "total revenue of the company",
        "revenue",
    };
    auto results = providers.reranker->rerank("total revenue", candidates, 5,
                                              TraceCtx{Role::baseline, "r", 0.0});
    REQUIRE(results.size() == 3);
    CHECK(results[0].original_position == 1);  // covers both query words
    CHECK(results[0].relevance == doctest::Approx(1.0));
    CHECK(results[1].original_position == 2);
    CHECK(results[2].relevance == doctest::Approx(0.0));

    auto single = providers.reranker->rerank("q", {"only one"}, 3, TraceCtx{});
    REQUIRE(single.size() == 1);
    CHECK(single[0].relevance >= 0.0);
    CHECK(single[0].relevance <= 1.0);

    std::vector<std::string> fifteen(15, "filler words");
    auto five = providers.reranker->rerank("filler", fifteen, 5, TraceCtx{});
    REQUIRE(five.size() == 5);
    for (const auto& r : five) CHECK(r.original_position < fifteen.size());
}

TEST_CASE("mock judge scores key-fact coverage") {
    auto providers = testutil::mock_providers();
    TraceCtx ctx{Role::judge, "j", 0.0};
    std::string gold = "Alpha reported revenue of 12 million in 2021";

    CHECK(providers.judge->judge("q", gold, gold, ctx) == 100);
    CHECK(providers.judge->judge("q", gold, "I don't know", ctx) == 0);

    // hand-computed: key facts (stopwords removed, deduplicated) are
    // {alpha, reported, revenue, 12, million, 2021} -> 6 words
    CHECK(providers.judge->judge("q", gold, "revenue was 12 million", ctx) ==
          50);  // covers 3 of 6
    CHECK(providers.judge->judge("q", gold, "Alpha reported revenue of 12 million", ctx) ==
          83);  // covers 5 of 6 -> round(83.33)
    CHECK(providers.judge->judge("q", gold, "alpha 2021", ctx) == 33);  // 2 of 6

    CHECK_THROWS_AS(providers.judge->judge("", gold, "x", ctx), Error);
}

TEST_CASE("compute_cost follows the pricing table") {
    PricingTable pricing;
    pricing.models["m"] = {1e-6, 4e-6};

    CHECK(compute_cost({}, pricing) == 0.0);

    TraceEntry call;
    call.model = "m";
    call.input_tokens = 1000;
    call.output_tokens = 100;
    CHECK(compute_cost({call}, pricing) == doctest::Approx(0.0014).epsilon(1e-12));

    // three-call fixture summed by hand:
    //   1000*1e-6 + 100*4e-6   = 0.0014
    //   200*1e-6  + 50*4e-6    = 0.0004
    //   10*2e-6   + 0*0        = 0.00002
    pricing.models["e"] = {2e-6, 0.0};
    TraceEntry second = call;
    second.input_tokens = 200;
    second.output_tokens = 50;
    TraceEntry third;
    third.model = "e";
    third.input_tokens = 10;
    CHECK(compute_cost({call, second, third}, pricing) ==
          doctest::Approx(0.00182).epsilon(1e-12));

    TraceEntry unknown;
    unknown.model = "mystery-model";
    CHECK_THROWS_WITH_AS(compute_cost({unknown}, pricing),
                         "no pricing for model: mystery-model", Error);
}

TEST_CASE("every mock call appends exactly one trace entry") {
    auto providers = testutil::mock_providers();
    providers.chat->chat(simple_request(), TraceCtx{Role::baseline, "c", 1.0});
    providers.embedder->embed({"a"}, TraceCtx{Role::ingest, "e", 2.0});
    providers.reranker->rerank("q", {"a", "b"}, 1, TraceCtx{Role::subagent, "r", 3.0});
    providers.judge->judge("q", "gold answer", "prediction", TraceCtx{Role::judge, "j", 4.0});
    auto entries = providers.trace->snapshot();
    REQUIRE(entries.size() == 4);
    CHECK(entries[0].kind == "chat");
    CHECK(entries[1].kind == "embed");
    CHECK(entries[2].kind == "rerank");
    CHECK(entries[3].kind == "judge");
    for (const auto& e : entries) CHECK(e.ok);
}

TEST_CASE("http chat retries with backoff and records failed attempts") {
    Config config = Config::defaults();
    config.providers.mode = "http";
    config.providers.endpoints = {{"chat", "http://example.test/v1/chat/completions"}};
    config.providers.api_key_env.clear();

    nlohmann::json ok_body{
        {"choices", {{{"message", {{"role", "assistant"}, {"content", "hello there"}}}}}},
        {"usage", {{"prompt_tokens", 11}, {"completion_tokens", 2}}}};

    auto transport = std::make_shared<ScriptedTransport>(
        std::vector<HttpResponse>{{200, ok_body.dump()}});
    transport->calls_fail_first = 2;

    std::vector<double> delays;
    HttpProviderDeps deps;
    deps.transport = transport;
    deps.sleep = [&](double ms) { delays.push_back(ms); };
    deps.counter = std::make_shared<WhitespaceTokenCounter>();
    deps.trace = std::make_shared<TraceSink>();
    deps.gate = std::make_shared<RequestGate>(4);

    HttpChatProvider chat(config.providers, deps);
    auto response = chat.chat(simple_request(), TraceCtx{Role::baseline, "h", 0.0});
    CHECK(response.text == "hello there");
    CHECK(response.input_tokens == 11);
    CHECK(response.output_tokens == 2);
    CHECK(transport->calls == 3);

    REQUIRE(delays.size() == 2);  // bounded exponential backoff
    CHECK(delays[0] == doctest::Approx(200.0));
    CHECK(delays[1] == doctest::Approx(800.0));

    auto entries = deps.trace->snapshot();
    REQUIRE(entries.size() == 3);
    CHECK_FALSE(entries[0].ok);
    CHECK_FALSE(entries[1].ok);
    CHECK(entries[2].ok);  // the successful attempt is accounted exactly once
}

TEST_CASE("http chat gives up after max attempts") {
    Config config = Config::defaults();
    config.providers.endpoints = {{"chat", "http://example.test/v1/chat"}};
    config.providers.api_key_env.clear();

    auto transport = std::make_shared<ScriptedTransport>(
        std::vector<HttpResponse>{{503, "busy"}});
    HttpProviderDeps deps;
    deps.transport = transport;
    deps.sleep = [](double) {};
    deps.trace = std::make_shared<TraceSink>();

    HttpChatProvider chat(config.providers, deps);
    CHECK_THROWS_AS(chat.chat(simple_request(), TraceCtx{}), Error);
    CHECK(transport->calls == 3);
}

TEST_CASE("mock mode never touches the transport") {
    Config config = Config::defaults();
    config.providers.mode = "mock";
    config.embedding.dimension = 16;
    auto poisoned = std::make_shared<PoisonedTransport>();
    auto providers = make_providers(config, std::make_shared<TraceSink>(), nullptr, poisoned);

    providers.chat->chat(simple_request(), TraceCtx{Role::baseline, "x", 1.0});
    providers.embedder->embed({"text"}, TraceCtx{});
    providers.reranker->rerank("q", {"c"}, 1, TraceCtx{});
    providers.judge->judge("q", "gold", "pred", TraceCtx{});
    CHECK(poisoned->hits.load() == 0);
}

TEST_CASE("request gate caps concurrent in-flight calls") {
    RequestGate gate(3);
    std::atomic<int> in_flight{0};
    std::atomic<int> peak{0};
    std::vector<std::thread> workers;
    for (int i = 0; i < 16; ++i) {
        workers.emplace_back([&] {
            RequestGate::Pass pass(&gate);
            int now = in_flight.fetch_add(1) + 1;
            int old = peak.load();
            while (now > old && !peak.compare_exchange_weak(old, now)) {
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(2));
            in_flight.fetch_sub(1);
        });
    }
    for (auto& w : workers) w.join();
    CHECK(peak.load() <= 3);
}

TEST_CASE("chat judge parses integer scores with one re-ask") {
    auto base = testutil::mock_providers();
    auto options = testutil::mock_options(base);
    auto scripted = std::make_shared<ScriptedChatProvider>(
        options, std::vector<std::string>{"the grade is\nScore: 85", "no digits here", "42"},
        /*repeat_last=*/false);
    ChatJudge judge(scripted, PromptLibrary::builtin().judge);
    CHECK(judge.judge("q", "gold", "pred", TraceCtx{}) == 85);
    CHECK(judge.judge("q", "gold", "pred", TraceCtx{}) == 42);  // after one re-ask
}
