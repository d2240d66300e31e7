// SPDX-License-Identifier: Apache-2.0
//
// Command line front end. Links only the C API; configuration flags become
// "section.key=value" overrides on top of the config file.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spdrag.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int exit_code_for(spdrag_status status) {
    switch (status) {
        case SPDRAG_OK:
            return kExitOk;
        case SPDRAG_ERR_CONFIG:
        case SPDRAG_ERR_USAGE:
        case SPDRAG_ERR_INVALID_ARGUMENT:
            return kExitUsage;
        default:
            return kExitRuntime;
    }
}

struct EngineHandle {
    spdrag_engine* engine = nullptr;
    ~EngineHandle() { spdrag_engine_destroy(engine); }
};

struct OwnedString {
    char* value = nullptr;
    ~OwnedString() { spdrag_string_free(value); }
};

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    bool mock = false;
    std::string index_dir;
    long long seed = -1;
};

int create_engine(const CommonOptions& options, EngineHandle& handle) {
    std::vector<std::string> overrides = options.overrides;
    if (options.mock) overrides.push_back("providers.mode=mock");
    if (!options.index_dir.empty()) overrides.push_back("paths.index_dir=" + options.index_dir);
    if (options.seed >= 0) overrides.push_back("providers.seed=" + std::to_string(options.seed));

    std::vector<const char*> raw;
    raw.reserve(overrides.size());
    for (const auto& o : overrides) raw.push_back(o.c_str());

    std::string config_path = options.config_path;
    if (config_path.empty()) {
        const char* env = std::getenv("SPDRAG_CONFIG");
        if (env != nullptr) config_path = env;
    }

    spdrag_status status = spdrag_engine_create(
        config_path.empty() ? nullptr : config_path.c_str(), raw.data(), raw.size(),
        &handle.engine);
    if (status != SPDRAG_OK) {
        std::cerr << "error: " << spdrag_last_error() << "\n";
        return exit_code_for(status);
    }
    return kExitOk;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return false;
    }
    out << content;
    return true;
}

void add_common_flags(CLI::App* cmd, CommonOptions& options) {
    cmd->add_option("--config", options.config_path,
                    "Config file (JSON); defaults to $SPDRAG_CONFIG when set");
    cmd->add_option("--set", options.overrides,
                    "Override a config value, e.g. --set retrieval.k=10 (repeatable)");
    cmd->add_flag("--mock", options.mock, "Use the deterministic offline providers");
    cmd->add_option("--index-dir", options.index_dir, "Index directory override");
    cmd->add_option("--seed", options.seed, "Deterministic seed for mock providers");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spdrag: per-document agentic retrieval with recursive synthesis"};
    app.require_subcommand(1);

    CommonOptions ingest_opts, query_opts, eval_opts, inspect_opts;

    auto* ingest = app.add_subcommand("ingest", "Chunk, embed and index a corpus");
    std::string corpus_path;
    ingest->add_option("--corpus", corpus_path,
                       "Corpus directory (.txt/.md files) or JSONL file")
        ->required();
    add_common_flags(ingest, ingest_opts);

    auto* query = app.add_subcommand("query", "Answer a question over the ingested corpus");
    std::string question;
    std::string trace_out;
    bool print_json = false;
    query->add_option("question", question, "The question to answer")->required();
    query->add_option("--trace-out", trace_out, "Write the call trace as JSONL");
    query->add_flag("--json", print_json, "Print the full run result as JSON");
    add_common_flags(query, query_opts);

    auto* eval = app.add_subcommand("eval", "Run systems over a dataset and score them");
    std::string dataset_path;
    std::string systems_csv;
    std::string report_out;
    std::string csv_out;
    bool loong_format = false;
    eval->add_option("--dataset", dataset_path, "Dataset JSONL file")->required();
    eval->add_option("--systems", systems_csv,
                     "Comma-separated systems (full-context,normal-rag,agentic-rag,spd-rag); "
                     "default all");
    eval->add_option("--report-out", report_out, "Write the report JSON here");
    eval->add_option("--csv-out", csv_out, "Write per-instance scores as CSV");
    eval->add_flag("--loong", loong_format, "Dataset uses the public benchmark layout");
    add_common_flags(eval, eval_opts);

    auto* inspect = app.add_subcommand("inspect-trace", "Summarize a trace JSONL file");
    std::string trace_path;
    inspect->add_option("trace", trace_path, "Trace JSONL file")->required();
    add_common_flags(inspect, inspect_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (ingest->parsed()) {
        EngineHandle handle;
        int rc = create_engine(ingest_opts, handle);
        if (rc != kExitOk) return rc;
        OwnedString report;
        spdrag_status status = spdrag_ingest(handle.engine, corpus_path.c_str(), &report.value);
        if (status != SPDRAG_OK) {
            std::cerr << "error: " << spdrag_last_error() << "\n";
            return exit_code_for(status);
        }
        auto j = nlohmann::json::parse(report.value);
        std::cout << "ingested " << j["ingested"].size() << ", skipped " << j["skipped"].size()
                  << ", errors " << j["errors"].size() << " (embed tokens "
                  << j["embed_input_tokens"].get<long long>() << ", cost "
                  << j["embed_cost"].get<double>() << ")\n";
        for (const auto& err : j["errors"]) {
            std::cerr << "  " << err["id"].get<std::string>() << ": "
                      << err["error"].get<std::string>() << "\n";
        }
        return j["errors"].empty() || !j["ingested"].empty() ? kExitOk : kExitRuntime;
    }

    if (query->parsed()) {
        EngineHandle handle;
        int rc = create_engine(query_opts, handle);
        if (rc != kExitOk) return rc;
        OwnedString result;
        spdrag_status status =
            spdrag_query(handle.engine, question.c_str(),
                         trace_out.empty() ? nullptr : trace_out.c_str(), &result.value);
        if (status != SPDRAG_OK) {
            std::cerr << "error: " << spdrag_last_error() << "\n";
            return exit_code_for(status);
        }
        auto j = nlohmann::json::parse(result.value);
        if (print_json) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << j["answer"].get<std::string>() << "\n\n";
            const auto& m = j["metrics"];
            std::cout << "tokens: " << m["total_tokens"].get<long long>() << " (in "
                      << m["input_tokens"].get<long long>() << ", out "
                      << m["output_tokens"].get<long long>() << "), cost "
                      << m["cost"].get<double>() << ", latency "
                      << m["latency_seconds"].get<double>() << "s\n";
        }
        return kExitOk;
    }

    if (eval->parsed()) {
        EngineHandle handle;
        int rc = create_engine(eval_opts, handle);
        if (rc != kExitOk) return rc;
        OwnedString result;
        spdrag_status status =
            spdrag_eval(handle.engine, dataset_path.c_str(),
                        systems_csv.empty() ? nullptr : systems_csv.c_str(),
                        loong_format ? 1 : 0, &result.value);
        if (status != SPDRAG_OK) {
            std::cerr << "error: " << spdrag_last_error() << "\n";
            return exit_code_for(status);
        }
        auto j = nlohmann::json::parse(result.value);
        std::cout << j["table"].get<std::string>();
        if (!report_out.empty() && !write_file(report_out, j["report"].dump(2))) {
            return kExitRuntime;
        }
        if (!csv_out.empty() && !write_file(csv_out, j["csv"].get<std::string>())) {
            return kExitRuntime;
        }
        return kExitOk;
    }

    if (inspect->parsed()) {
        EngineHandle handle;
        int rc = create_engine(inspect_opts, handle);
        if (rc != kExitOk) return rc;
        OwnedString result;
        spdrag_status status =
            spdrag_trace_summary(handle.engine, trace_path.c_str(), &result.value);
        if (status != SPDRAG_OK) {
            std::cerr << "error: " << spdrag_last_error() << "\n";
            return exit_code_for(status);
        }
        std::cout << nlohmann::json::parse(result.value).dump(2) << "\n";
        return kExitOk;
    }

    return kExitUsage;
}
