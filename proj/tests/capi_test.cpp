// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared-library surface the way an external consumer would:
// opaque handle, error codes, thread-local error text, JSON results.
#include "spdrag.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct TempDir {
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("spdrag-capi-" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::filesystem::path path;

    std::string write(const std::string& name, const std::string& content) const {
        auto p = path / name;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream out(p);
        out << content;
        return p.string();
    }
};

struct Engine {
    spdrag_engine* handle = nullptr;
    ~Engine() { spdrag_engine_destroy(handle); }
};

struct Out {
    char* s = nullptr;
    ~Out() { spdrag_string_free(s); }
};

}  // namespace

TEST_CASE("version and argument validation") {
    CHECK(std::string(spdrag_version()) == "0.1.0");
    CHECK(spdrag_engine_create(nullptr, nullptr, 0, nullptr) ==
          SPDRAG_ERR_INVALID_ARGUMENT);
    Engine engine;
    CHECK(spdrag_ingest(nullptr, "x", nullptr) == SPDRAG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("bad config paths and overrides surface as status codes") {
    Engine engine;
    CHECK(spdrag_engine_create("/definitely/not/here.json", nullptr, 0, &engine.handle) ==
          SPDRAG_ERR_CONFIG);
    CHECK(std::string(spdrag_last_error()).find("config") != std::string::npos);

    const char* bad[] = {"retrieval.bogus=1"};
    CHECK(spdrag_engine_create(nullptr, bad, 1, &engine.handle) == SPDRAG_ERR_USAGE);

    const char* invalid[] = {"chunking.chunk_overlap=5000"};
    CHECK(spdrag_engine_create(nullptr, invalid, 1, &engine.handle) == SPDRAG_ERR_CONFIG);
}

TEST_CASE("ingest, query, eval and trace summary through the C surface") {
    TempDir tmp;
    tmp.write("corpus/a.md", "# alpha\nthe first document mentions maple syrup imports\n");
    tmp.write("corpus/b.md", "# beta\nthe second document mentions copper exports\n");
    std::string dataset = tmp.write(
        "data.jsonl",
        R"({"id": "i1", "question": "what is mentioned?", "gold_answer": "maple syrup copper", "documents": [{"id": "d1", "text": "maple syrup story"}, {"id": "d2", "text": "copper story"}]})"
        "\n");

    std::string index_dir = (tmp.path / "index").string();
    std::vector<std::string> overrides = {
        "providers.mode=mock", "embedding.dimension=24", "paths.index_dir=" + index_dir};
    std::vector<const char*> raw;
    for (const auto& o : overrides) raw.push_back(o.c_str());

    Engine engine;
    REQUIRE(spdrag_engine_create(nullptr, raw.data(), raw.size(), &engine.handle) ==
            SPDRAG_OK);

    Out config_json;
    REQUIRE(spdrag_engine_config_json(engine.handle, &config_json.s) == SPDRAG_OK);
    CHECK(nlohmann::json::parse(config_json.s)["providers"]["mode"] == "mock");

    // query before ingest is a usage error pointing at ingest
    Out premature;
    CHECK(spdrag_query(engine.handle, "anything", nullptr, &premature.s) ==
          SPDRAG_ERR_USAGE);
    CHECK(std::string(spdrag_last_error()).find("ingest") != std::string::npos);

    Out ingest_report;
    REQUIRE(spdrag_ingest(engine.handle, (tmp.path / "corpus").string().c_str(),
                          &ingest_report.s) == SPDRAG_OK);
    auto report = nlohmann::json::parse(ingest_report.s);
    CHECK(report["ingested"].size() == 2);
    CHECK(report["errors"].empty());

    std::string trace_path = (tmp.path / "trace.jsonl").string();
    Out answer;
    REQUIRE(spdrag_query(engine.handle, "what is imported and exported?",
                         trace_path.c_str(), &answer.s) == SPDRAG_OK);
    auto result = nlohmann::json::parse(answer.s);
    CHECK(result["findings"].size() == 2);
    CHECK(!result["answer"].get<std::string>().empty());
    CHECK(result["metrics"]["total_tokens"].get<long long>() > 0);

    Out summary;
    REQUIRE(spdrag_trace_summary(engine.handle, trace_path.c_str(), &summary.s) ==
            SPDRAG_OK);
    auto trace_info = nlohmann::json::parse(summary.s);
    CHECK(trace_info["entries"].get<long long>() > 0);
    CHECK(trace_info["per_role"].contains("coordinator"));

    Out eval_out;
    REQUIRE(spdrag_eval(engine.handle, dataset.c_str(), "full-context,spd-rag", 0,
                        &eval_out.s) == SPDRAG_OK);
    auto eval_json = nlohmann::json::parse(eval_out.s);
    CHECK(eval_json["report"]["per_system"].contains("spd-rag"));
    CHECK(eval_json["table"].get<std::string>().find("full-context") != std::string::npos);

    Out bad_eval;
    CHECK(spdrag_eval(engine.handle, dataset.c_str(), "mega-rag", 0, &bad_eval.s) ==
          SPDRAG_ERR_USAGE);
    CHECK(std::string(spdrag_last_error()).find("valid systems") != std::string::npos);
}
