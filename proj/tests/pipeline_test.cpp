// SPDX-License-Identifier: Apache-2.0
#include "spdrag/pipeline.hpp"

#include "doctest.h"
#include "spdrag/error.hpp"
#include "spdrag/mock_providers.hpp"
#include "spdrag/splitter.hpp"
#include "testutil.hpp"

using namespace spdrag;

namespace {

struct Corpus {
    std::vector<Document> docs;
    std::vector<Collection> collections;
    std::map<std::string, const Collection*> by_id;
};

Corpus build_corpus(const ProviderSet& providers, const Config& config, std::size_t n) {
    Corpus corpus;
    for (std::size_t i = 0; i < n; ++i) {
        std::string id = "doc-" + std::to_string(i);
        corpus.docs.push_back(testutil::make_doc(
            id, "Company " + std::to_string(i) + " earned fact" + std::to_string(i) +
                    " and reported value" + std::to_string(i) + " this year."));
    }
    SplitOptions split_options{config.chunking.chunk_size, config.chunking.chunk_overlap};
    for (const auto& doc : corpus.docs) {
        auto chunks = split_document(doc, split_options, *providers.counter);
        corpus.collections.push_back(build_collection(chunks, *providers.embedder));
    }
    for (const auto& c : corpus.collections) corpus.by_id.emplace(c.doc_id(), &c);
    return corpus;
}

Config mock_config() {
    Config config = Config::defaults();
    config.providers.mode = "mock";
    config.embedding.dimension = 32;
    return config;
}

std::size_t chats_with_role(const RunTrace& trace, Role role) {
    std::size_t n = 0;
    for (const auto& e : trace) {
        if (e.kind == "chat" && e.role == role) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("single-document run has the minimal topology") {
    Config config = mock_config();
    auto providers = testutil::mock_providers();
    Corpus corpus = build_corpus(providers, config, 1);

    RunResult result = run_query("what did company 0 earn", corpus.docs, corpus.by_id,
                                 providers, PromptLibrary::builtin(), config);

    CHECK(result.findings.size() == 1);
    CHECK(!result.answer.empty());
    CHECK(chats_with_role(result.trace, Role::coordinator) == 1);
    CHECK(chats_with_role(result.trace, Role::subagent) <= 7);
    CHECK(chats_with_role(result.trace, Role::synthesizer) == 1);
}

TEST_CASE("eleven documents fan out into eleven findings and synthesis sees all") {
    Config config = mock_config();
    auto providers = testutil::mock_providers();
    Corpus corpus = build_corpus(providers, config, 11);

    RunResult result = run_query("compare all companies", corpus.docs, corpus.by_id,
                                 providers, PromptLibrary::builtin(), config);
    CHECK(result.findings.size() == 11);
    REQUIRE(!result.merge_trace.empty());
    CHECK(result.merge_trace[0]["summaries"] == 11);

    // one findings entry per document, in corpus order
    for (std::size_t i = 0; i < 11; ++i) {
        CHECK(result.findings[i].doc_id == corpus.docs[i].id);
    }
}

TEST_CASE("layers are strictly ordered in the trace") {
    Config config = mock_config();
    auto providers = testutil::mock_providers();
    Corpus corpus = build_corpus(providers, config, 4);

    RunResult result = run_query("q", corpus.docs, corpus.by_id, providers,
                                 PromptLibrary::builtin(), config);

    double coordinator_end = 0.0;
    double agents_start = std::numeric_limits<double>::infinity();
    double agents_end = 0.0;
    double synthesis_start = std::numeric_limits<double>::infinity();
    for (const auto& e : result.trace) {
        if (e.role == Role::coordinator) coordinator_end = std::max(coordinator_end, e.finished_at);
        if (e.role == Role::subagent) {
            agents_start = std::min(agents_start, e.started_at);
            agents_end = std::max(agents_end, e.finished_at);
        }
        if (e.role == Role::synthesizer) {
            synthesis_start = std::min(synthesis_start, e.started_at);
        }
    }
    CHECK(coordinator_end < agents_start);
    CHECK(agents_end < synthesis_start);
}

TEST_CASE("metrics equal the sums over the trace") {
    Config config = mock_config();
    auto providers = testutil::mock_providers();
    Corpus corpus = build_corpus(providers, config, 3);

    RunResult result = run_query("q", corpus.docs, corpus.by_id, providers,
                                 PromptLibrary::builtin(), config);

    std::size_t in = 0;
    std::size_t out = 0;
    for (const auto& e : result.trace) {
        in += e.input_tokens;
        out += e.output_tokens;
    }
    CHECK(result.metrics.input_tokens == in);
    CHECK(result.metrics.output_tokens == out);
    CHECK(result.metrics.total_tokens == in + out);
    CHECK(result.metrics.cost ==
          doctest::Approx(compute_cost(result.trace, config.providers.pricing)));
    CHECK(result.metrics.latency_seconds > 0.0);
}

TEST_CASE("seeded runs serialize byte-identically") {
    Config config = mock_config();

    auto run_once = [&]() {
        auto providers = testutil::mock_providers(42);
        Corpus corpus = build_corpus(providers, config, 3);
        RunResult result = run_query("what are the reported values", corpus.docs,
                                     corpus.by_id, providers, PromptLibrary::builtin(),
                                     config);
        return result.to_json().dump();
    };
    std::string first = run_once();
    std::string second = run_once();
    CHECK(first == second);
    CHECK(fnv1a64(first) == fnv1a64(second));
}

TEST_CASE("one failing agent degrades its findings without sinking the run") {
    Config config = mock_config();
    auto providers = testutil::mock_providers();
    Corpus corpus = build_corpus(providers, config, 3);

    // poison exactly the agent whose system prompt names doc-1
    providers.chat = std::make_shared<testutil::PoisonedChat>(providers.chat, "doc-1");

    RunResult result = run_query("q", corpus.docs, corpus.by_id, providers,
                                 PromptLibrary::builtin(), config);
    REQUIRE(result.findings.size() == 3);
    CHECK(!result.findings[0].error.has_value());
    CHECK(result.findings[1].error.has_value());
    CHECK(result.findings[1].relevance == 0.0);
    CHECK(!result.findings[2].error.has_value());
    CHECK(!result.answer.empty());
}

TEST_CASE("coordinator failure aborts the run") {
    Config config = mock_config();
    auto providers = testutil::mock_providers();
    Corpus corpus = build_corpus(providers, config, 2);
    providers.chat = std::make_shared<testutil::PoisonedChat>(
        providers.chat, "lead researcher");  // matches the coordinator template
    CHECK_THROWS_AS(run_query("q", corpus.docs, corpus.by_id, providers,
                              PromptLibrary::builtin(), config),
                    Error);
}

TEST_CASE("synthesis failure aborts and dumps the partial state") {
    testutil::TempDir tmp;
    Config config = mock_config();
    config.paths.index_dir = (tmp.path() / "idx").string();
    auto providers = testutil::mock_providers();
    Corpus corpus = build_corpus(providers, config, 2);
    providers.chat =
        std::make_shared<testutil::PoisonedChat>(providers.chat, "research synthesizer");

    CHECK_THROWS_WITH_AS(run_query("doomed question", corpus.docs, corpus.by_id, providers,
                                   PromptLibrary::builtin(), config),
                         doctest::Contains("partial state at"), Error);

    bool dumped = false;
    for (const auto& entry : std::filesystem::directory_iterator(config.paths.index_dir)) {
        if (entry.path().filename().string().rfind("partial-run-", 0) == 0) {
            dumped = true;
            auto j = nlohmann::json::parse(testutil::read_file(entry.path()));
            CHECK(j["findings"].size() == 2);
            CHECK(j["query"] == "doomed question");
        }
    }
    CHECK(dumped);
}

TEST_CASE("empty corpus and unindexed documents are rejected") {
    Config config = mock_config();
    auto providers = testutil::mock_providers();
    CHECK_THROWS_AS(run_query("q", {}, {}, providers, PromptLibrary::builtin(), config),
                    Error);

    Corpus corpus = build_corpus(providers, config, 1);
    corpus.docs.push_back(testutil::make_doc("ghost", "not indexed"));
    CHECK_THROWS_AS(run_query("q", corpus.docs, corpus.by_id, providers,
                              PromptLibrary::builtin(), config),
                    Error);
}
