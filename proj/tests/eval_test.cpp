// SPDX-License-Identifier: Apache-2.0
#include "spdrag/eval.hpp"

#include "doctest.h"
#include "spdrag/error.hpp"
#include "spdrag/mock_providers.hpp"
#include "spdrag/provider_factory.hpp"
#include "spdrag/schema.hpp"
#include "testutil.hpp"

using namespace spdrag;

namespace {

Config mock_config() {
    Config config = Config::defaults();
    config.providers.mode = "mock";
    config.embedding.dimension = 32;
    config.chunking.chunk_size = 60;
    config.chunking.chunk_overlap = 10;
    return config;
}

ProviderMaker maker_for(const Config& config) {
    return [config](std::shared_ptr<TraceSink> sink) {
        return make_providers(config, std::move(sink));
    };
}

EvalInstance simple_instance(const std::string& id, std::size_t docs,
                             TaskType task = TaskType::spotlight_locating,
                             Domain domain = Domain::paper) {
    EvalInstance instance;
    instance.id = id;
    instance.question = "what are the special findings";
    instance.gold_answer = "findingzero findingone";
    instance.task_type = task;
    instance.domain = domain;
    for (std::size_t i = 0; i < docs; ++i) {
        instance.documents.push_back(testutil::make_doc(
            "d" + std::to_string(i),
            "Document " + std::to_string(i) + " holds finding" +
                (i == 0 ? "zero special findings" : "one special findings") + " today."));
    }
    return instance;
}

// Eight documents, one unique gold fact each; rerank depth (top_n = 5)
// cannot cover them all in one global retrieval.
EvalInstance coverage_instance(const std::string& id, TaskType task, Domain domain) {
    static const char* kFacts[] = {
        "alphafact north 11", "bravofact south 22", "charliefact east 33",
        "deltafact west 44",  "echofact gold 55",   "foxfact silver 66",
        "gulffact copper 77", "hotelfact iron 88",
    };
    EvalInstance instance;
    instance.id = id;
    instance.question = "list every regional fact with its number";
    instance.task_type = task;
    instance.domain = domain;
    std::string gold;
    for (std::size_t i = 0; i < 8; ++i) {
        std::string fact = kFacts[i];
        gold += fact + (i + 1 < 8 ? "; " : "");
        instance.documents.push_back(testutil::make_doc(
            "doc" + std::to_string(i),
            "Report " + std::to_string(i) + ". The regional fact is " + fact + "."));
    }
    instance.gold_answer = gold;
    return instance;
}

}  // namespace

TEST_CASE("system names parse and unknown ones fail with the valid list") {
    CHECK(parse_system("spd-rag") == SystemKind::spd_rag);
    CHECK(parse_system("full-context") == SystemKind::full_context);
    CHECK(parse_system("normal_rag") == SystemKind::normal_rag);
    CHECK_THROWS_WITH_AS(parse_system("mega-rag"),
                         "unknown system \"mega-rag\"; valid systems: full-context, "
                         "normal-rag, agentic-rag, spd-rag",
                         Error);
}

TEST_CASE("full-context baseline sends every document and no retrieval") {
    Config config = mock_config();
    auto providers = maker_for(config)(std::make_shared<TraceSink>());
    EvalInstance instance = simple_instance("i1", 2);

    SystemRun run = run_full_context_baseline(instance, providers, PromptLibrary::builtin(),
                                              config);
    CHECK_FALSE(run.skipped);
    // the mock answer echoes the context, so both document texts flow through
    CHECK(run.answer.find("findingzero") != std::string::npos);
    CHECK(run.answer.find("findingone") != std::string::npos);

    std::size_t chats = 0;
    for (const auto& e : run.trace) {
        CHECK(e.kind != "embed");
        CHECK(e.kind != "rerank");
        if (e.kind == "chat") ++chats;
    }
    CHECK(chats == 1);
}

TEST_CASE("full-context overflow marks the instance skipped") {
    Config config = mock_config();
    config.eval.context_cap_tokens = 10;
    auto providers = maker_for(config)(std::make_shared<TraceSink>());
    EvalInstance instance = simple_instance("i1", 2);
    SystemRun run = run_full_context_baseline(instance, providers, PromptLibrary::builtin(),
                                              config);
    CHECK(run.skipped);
    CHECK(run.skip_reason.find("context overflow") != std::string::npos);
    CHECK(run.trace.empty());
}

TEST_CASE("normal rag issues exactly one retrieval then one chat") {
    Config config = mock_config();
    auto providers = maker_for(config)(std::make_shared<TraceSink>());
    EvalInstance instance = simple_instance("i1", 3);
    EvalIndexes indexes = build_eval_indexes(instance, providers, config);

    auto sink = std::make_shared<TraceSink>();
    auto run_providers = maker_for(config)(sink);
    SystemRun run = run_normal_rag(instance, indexes.global, run_providers,
                                   PromptLibrary::builtin(), config);
    std::size_t embeds = 0;
    std::size_t reranks = 0;
    std::size_t chats = 0;
    for (const auto& e : run.trace) {
        if (e.kind == "embed") ++embeds;
        if (e.kind == "rerank") ++reranks;
        if (e.kind == "chat") ++chats;
    }
    CHECK(embeds == 1);
    CHECK(reranks == 1);
    CHECK(chats == 1);
    CHECK(!run.answer.empty());
}

TEST_CASE("normal rag with K covering all chunks retrieves everything") {
    Config config = mock_config();
    config.eval.normal_rag_k = 50;
    config.retrieval.top_n = 15;
    config.retrieval.k = 50;
    auto providers = maker_for(config)(std::make_shared<TraceSink>());
    EvalInstance instance = simple_instance("i1", 2);
    EvalIndexes indexes = build_eval_indexes(instance, providers, config);

    SystemRun run = run_normal_rag(instance, indexes.global, providers,
                                   PromptLibrary::builtin(), config);
    // both single-chunk documents fit through rerank depth 15
    CHECK(run.answer.find("findingzero") != std::string::npos);
    CHECK(run.answer.find("findingone") != std::string::npos);
}

TEST_CASE("agentic baseline is cut at its ten-search cap") {
    Config config = mock_config();
    auto base = maker_for(config)(std::make_shared<TraceSink>());
    EvalInstance instance = simple_instance("i1", 2);
    EvalIndexes indexes = build_eval_indexes(instance, base, config);

    auto options = testutil::mock_options(base);
    std::vector<std::string> script;
    for (int i = 0; i < 12; ++i) {
        script.push_back(nlohmann::json{{"action", "search"},
                                        {"query", "q" + std::to_string(i)},
                                        {"reasoning", "r"}}.dump());
    }
    ProviderSet scripted = base;
    scripted.chat = std::make_shared<SchemaValidatingChat>(
        std::make_shared<ScriptedChatProvider>(options, script, /*repeat_last=*/true));

    SystemRun run = run_agentic_rag(instance, indexes.global, scripted,
                                    PromptLibrary::builtin(), config);
    std::size_t searches = 0;
    for (const auto& e : run.trace) {
        if (e.kind == "retrieval") ++searches;
    }
    CHECK(searches == 10);

    // scripted search-then-finalize uses a single search
    std::vector<std::string> quick = {
        nlohmann::json{{"action", "search"}, {"query", "x"}, {"reasoning", "r"}}.dump(),
        nlohmann::json{{"action", "finalize"}, {"findings", "Answer: done"},
                       {"relevance", 1.0}}.dump()};
    ProviderSet scripted2 = base;
    scripted2.chat = std::make_shared<SchemaValidatingChat>(
        std::make_shared<ScriptedChatProvider>(options, quick, /*repeat_last=*/false));
    SystemRun short_run = run_agentic_rag(instance, indexes.global, scripted2,
                                          PromptLibrary::builtin(), config);
    std::size_t short_searches = 0;
    for (const auto& e : short_run.trace) {
        if (e.kind == "retrieval") ++short_searches;
    }
    CHECK(short_searches == 1);
    CHECK(short_run.answer == "Answer: done");
}

TEST_CASE("evaluate aggregates scores, perfect rate and breakdowns") {
    Config config = mock_config();
    // two instances: one the mock pipeline answers perfectly, one where the
    // gold answer shares nothing with any document
    EvalInstance good = simple_instance("good", 2, TaskType::comparison, Domain::financial);
    good.gold_answer = "findingzero findingone special findings";
    EvalInstance bad = simple_instance("bad", 2, TaskType::clustering, Domain::paper);
    bad.gold_answer = "zebra quagga okapi";

    EvalReport report = evaluate({SystemKind::full_context}, {good, bad}, config,
                                 PromptLibrary::builtin(), maker_for(config));

    const auto& agg = report.per_system.at(SystemKind::full_context);
    CHECK(agg.n == 2);
    CHECK(agg.n_scored == 2);
    CHECK(agg.avg_score == doctest::Approx(50.0));
    CHECK(agg.perfect_rate == doctest::Approx(50.0));
    CHECK(agg.score_per_dollar ==
          doctest::Approx(agg.avg_score / agg.avg_cost).epsilon(1e-9));

    REQUIRE(report.by_task.at(SystemKind::full_context).count(TaskType::comparison) == 1);
    CHECK(report.by_task.at(SystemKind::full_context).at(TaskType::comparison).avg_score ==
          doctest::Approx(100.0));
    CHECK(report.by_domain.at(SystemKind::full_context).at(Domain::paper).avg_score ==
          doctest::Approx(0.0));

    // accounting parity: per-run metrics came from the trace sums
    for (const auto& outcome : report.outcomes) {
        CHECK(outcome.metrics.total_tokens ==
              outcome.metrics.input_tokens + outcome.metrics.output_tokens);
    }
}

TEST_CASE("judge failure leaves the pair unscored but counted") {
    struct FailingJudge final : JudgeProvider {
        int judge(const std::string&, const std::string&, const std::string&,
                  const TraceCtx&) override {
            throw provider_error("judge endpoint unavailable");
        }
    };

    Config config = mock_config();
    ProviderMaker maker = [&config](std::shared_ptr<TraceSink> sink) {
        ProviderSet set = make_providers(config, std::move(sink));
        set.judge = std::make_shared<FailingJudge>();
        return set;
    };

    EvalInstance instance = simple_instance("i1", 2);
    EvalReport report = evaluate({SystemKind::full_context}, {instance}, config,
                                 PromptLibrary::builtin(), maker);
    const auto& agg = report.per_system.at(SystemKind::full_context);
    CHECK(agg.n == 1);
    CHECK(agg.n_scored == 0);
    CHECK(agg.n_unscored == 1);
    CHECK(agg.avg_score == 0.0);
    REQUIRE(report.outcomes.size() == 1);
    CHECK_FALSE(report.outcomes[0].score.has_value());
    CHECK(report.outcomes[0].reason.find("judge failed") != std::string::npos);
}

TEST_CASE("golden agentic answer for the seeded fixture") {
    Config config = mock_config();
    auto providers = maker_for(config)(std::make_shared<TraceSink>());
    EvalInstance instance;
    instance.id = "g";
    instance.question = "what arrived";
    instance.gold_answer = "maple copper";
    instance.documents = {testutil::make_doc("d0", "the maple shipment arrived"),
                          testutil::make_doc("d1", "the copper shipment arrived")};
    EvalIndexes indexes = build_eval_indexes(instance, providers, config);

    SystemRun run = run_agentic_rag(instance, indexes.global, providers,
                                    PromptLibrary::builtin(), config);
    // frozen from a seed-42 mock run: two searches for the question, then a
    // finalize that carries both retrieved chunks
    CHECK(run.answer ==
          "Additional evidence:\nthe maple shipment arrived\nthe copper shipment arrived\n");
}

TEST_CASE("evaluate rejects an empty dataset") {
    Config config = mock_config();
    CHECK_THROWS_AS(evaluate({SystemKind::spd_rag}, {}, config, PromptLibrary::builtin(),
                             maker_for(config)),
                    Error);
}

TEST_CASE("report renders a table and a csv") {
    Config config = mock_config();
    EvalInstance instance = simple_instance("i1", 2);
    EvalReport report = evaluate(all_systems(), {instance}, config, PromptLibrary::builtin(),
                                 maker_for(config));
    std::string table = report.to_table();
    for (const char* name : {"full-context", "normal-rag", "agentic-rag", "spd-rag"}) {
        CHECK(table.find(name) != std::string::npos);
    }
    CHECK(table.find("By task type") != std::string::npos);
    CHECK(table.find("By domain") != std::string::npos);

    std::string csv = report.to_csv();
    CHECK(csv.find("instance_id,system,score") == 0);
    CHECK(report.to_json().contains("per_system"));
}

TEST_CASE("spread gold facts: the pipeline beats single-shot retrieval") {
    Config config = mock_config();
    std::vector<EvalInstance> dataset;
    for (int i = 0; i < 6; ++i) {
        dataset.push_back(coverage_instance(
            "cov" + std::to_string(i),
            static_cast<TaskType>(i % 4),
            i % 2 == 0 ? Domain::paper : Domain::financial));
    }

    EvalReport report = evaluate({SystemKind::normal_rag, SystemKind::spd_rag}, dataset,
                                 config, PromptLibrary::builtin(), maker_for(config));

    double spd = report.per_system.at(SystemKind::spd_rag).avg_score;
    double normal = report.per_system.at(SystemKind::normal_rag).avg_score;
    CHECK(spd > normal);
    CHECK(report.per_system.at(SystemKind::spd_rag).n_scored == 6);
    CHECK(report.per_system.at(SystemKind::normal_rag).n_scored == 6);
}

TEST_CASE("dataset loader reads inline documents and validates") {
    testutil::TempDir tmp;
    auto path = tmp.write(
        "data.jsonl",
        R"({"id": "a", "question": "q?", "gold_answer": "g", "task_type": "comparison", "domain": "financial", "documents": [{"id": "d1", "text": "hello world"}]})"
        "\n"
        R"({"id": "b", "question": "q2?", "gold_answer": "g2", "documents": [{"id": "d1", "text": "text here"}]})"
        "\n");
    auto dataset = load_dataset_jsonl(path.string());
    REQUIRE(dataset.size() == 2);
    CHECK(dataset[0].task_type == TaskType::comparison);
    CHECK(dataset[0].domain == Domain::financial);
    CHECK(dataset[1].task_type == TaskType::spotlight_locating);

    auto bad = tmp.write("bad.jsonl",
                         R"({"id": "a", "question": "q?", "gold_answer": "g", "documents": []})"
                         "\n");
    CHECK_THROWS_AS(load_dataset_jsonl(bad.string()), Error);
}

TEST_CASE("dataset documents can live in referenced files") {
    testutil::TempDir tmp;
    tmp.write("docs/one.txt", "the referenced document body");
    auto path = tmp.write(
        "data.jsonl",
        R"({"id": "a", "question": "q?", "gold_answer": "g", "documents": ["docs/one.txt"]})"
        "\n");
    auto dataset = load_dataset_jsonl(path.string());
    REQUIRE(dataset.size() == 1);
    REQUIRE(dataset[0].documents.size() == 1);
    CHECK(dataset[0].documents[0].text == "the referenced document body");
}

TEST_CASE("the loong adapter maps its keys onto instances") {
    testutil::TempDir tmp;
    tmp.write("docs/r1.txt", "report body one");
    tmp.write("docs/r2.txt", "report body two");
    auto path = tmp.write(
        "loong.jsonl",
        R"({"id": "L1", "question": "q?", "answer": "a", "type": 2, "source": "financial", "docs": ["docs/r1.txt", "docs/r2.txt"]})"
        "\n");
    auto dataset = load_loong_jsonl(path.string(), "");
    REQUIRE(dataset.size() == 1);
    CHECK(dataset[0].task_type == TaskType::comparison);
    CHECK(dataset[0].domain == Domain::financial);
    CHECK(dataset[0].documents.size() == 2);
    CHECK(dataset[0].gold_answer == "a");
}
