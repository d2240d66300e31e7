// SPDX-License-Identifier: Apache-2.0
#include "spdrag/engine.hpp"

#include <filesystem>
#include <fstream>
#include <map>

#include "spdrag/collection.hpp"
#include "spdrag/corpus_store.hpp"
#include "spdrag/error.hpp"
#include "spdrag/eval.hpp"
#include "spdrag/pipeline.hpp"
#include "spdrag/provider_factory.hpp"
#include "spdrag/splitter.hpp"
#include "spdrag/strings.hpp"

namespace spdrag {

namespace fs = std::filesystem;

namespace {

constexpr int kManifestVersion = 1;

// The manifest invalidates stored chunks/vectors when anything that shaped
// them changes.
std::string index_fingerprint(const Config& c) {
    return c.tokenizer + "|" + std::to_string(c.chunking.chunk_size) + "|" +
           std::to_string(c.chunking.chunk_overlap) + "|" +
           std::to_string(c.embedding.dimension) + "|" + c.providers.embedding_model + "|" +
           c.providers.mode + "|" + std::to_string(c.providers.seed);
}

nlohmann::json load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) return nlohmann::json{{"version", kManifestVersion}, {"docs", nlohmann::json::object()}};
    nlohmann::json j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || j.value("version", 0) != kManifestVersion) {
        return nlohmann::json{{"version", kManifestVersion}, {"docs", nlohmann::json::object()}};
    }
    return j;
}

void save_manifest(const fs::path& path, const nlohmann::json& manifest) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write manifest: " + path.string());
    out << manifest.dump(2);
}

}  // namespace

Engine::Engine(Config config)
    : config_(std::move(config)),
      prompts_(PromptLibrary::load(config_.paths.prompt_dir)),
      gate_(std::make_shared<RequestGate>(config_.providers.request_cap)) {
    config_.validate();
}

ProviderSet Engine::fresh_providers(std::shared_ptr<TraceSink> sink) const {
    return make_providers(config_, std::move(sink), gate_);
}

nlohmann::json Engine::ingest(const std::string& corpus_path) {
    FileErrors read_errors;
    auto docs = load_corpus(corpus_path, &read_errors);
    fs::path index_dir(config_.paths.index_dir);
    fs::create_directories(index_dir);

    nlohmann::json manifest = load_manifest(index_dir / "manifest.json");
    manifest["fingerprint_current"] = index_fingerprint(config_);

    auto trace = std::make_shared<TraceSink>();
    ProviderSet providers = fresh_providers(trace);
    SplitOptions split_options{config_.chunking.chunk_size, config_.chunking.chunk_overlap};

    nlohmann::json report{{"documents", docs.size()},
                          {"ingested", nlohmann::json::array()},
                          {"skipped", nlohmann::json::array()},
                          {"errors", nlohmann::json::array()}};
    for (const auto& [file, error] : read_errors) {
        report["errors"].push_back({{"id", file}, {"error", error}});
    }

    for (const auto& doc : docs) {
        std::string content_hash = hex64(fnv1a64(doc.text));
        std::string slug = file_slug(doc.id);
        fs::path chunks_path = index_dir / (slug + ".chunks.jsonl");
        fs::path collection_path = index_dir / (slug + ".collection.json");

        const auto& entry = manifest["docs"][doc.id];
        bool unchanged = entry.is_object() && entry.value("hash", "") == content_hash &&
                         entry.value("fingerprint", "") == index_fingerprint(config_) &&
                         fs::exists(chunks_path) && fs::exists(collection_path);
        if (unchanged) {
            report["skipped"].push_back(doc.id);
            continue;
        }

        try {
            auto chunks = split_document(doc, split_options, *providers.counter);
            Collection collection = build_collection(chunks, *providers.embedder);
            write_chunk_store(chunks, chunks_path.string());
            collection.save(collection_path.string());
            manifest["docs"][doc.id] = {{"name", doc.name},
                                        {"hash", content_hash},
                                        {"fingerprint", index_fingerprint(config_)},
                                        {"chunks_file", chunks_path.filename().string()},
                                        {"collection_file", collection_path.filename().string()},
                                        {"chunk_count", chunks.size()}};
            report["ingested"].push_back(doc.id);
        } catch (const Error& e) {
            report["errors"].push_back({{"id", doc.id}, {"error", e.what()}});
        }
    }
    save_manifest(index_dir / "manifest.json", manifest);

    auto entries = trace->snapshot();
    report["embed_input_tokens"] = total_input_tokens(entries);
    report["embed_cost"] = compute_cost(entries, config_.providers.pricing);
    return report;
}

nlohmann::json Engine::query(const std::string& question, const std::string& trace_out) {
    fs::path index_dir(config_.paths.index_dir);
    fs::path manifest_path = index_dir / "manifest.json";
    if (!fs::exists(manifest_path)) {
        throw usage_error("no ingested corpus at " + index_dir.string() +
                          "; run `spdrag ingest --corpus <path>` first");
    }
    nlohmann::json manifest = load_manifest(manifest_path);
    if (!manifest.contains("docs") || manifest["docs"].empty()) {
        throw usage_error("the index at " + index_dir.string() +
                          " is empty; run `spdrag ingest --corpus <path>` first");
    }

    std::vector<Document> corpus;
    std::vector<Collection> collections;
    collections.reserve(manifest["docs"].size());
    for (auto it = manifest["docs"].begin(); it != manifest["docs"].end(); ++it) {
        fs::path chunks_path = index_dir / it.value().value("chunks_file", "");
        fs::path collection_path = index_dir / it.value().value("collection_file", "");
        if (!fs::exists(chunks_path) || !fs::exists(collection_path)) {
            throw io_error("index files missing for document " + it.key() +
                           "; re-run `spdrag ingest`");
        }
        auto chunks = read_chunk_store(chunks_path.string());
        Document doc;
        doc.id = it.key();
        doc.name = it.value().value("name", it.key());
        doc.text = reassemble_chunks(chunks);
        corpus.push_back(std::move(doc));
        collections.push_back(Collection::load(collection_path.string()));
    }

    std::map<std::string, const Collection*> by_id;
    for (const auto& collection : collections) {
        by_id.emplace(collection.doc_id(), &collection);
    }

    auto trace = std::make_shared<TraceSink>();
    ProviderSet providers = fresh_providers(trace);
    RunResult result = run_query(question, corpus, by_id, providers, prompts_, config_);
    if (!trace_out.empty()) {
        write_trace_jsonl(canonical_order(result.trace), trace_out);
    }
    return result.to_json();
}

nlohmann::json Engine::eval(const std::string& dataset_path,
                            const std::vector<std::string>& system_names, bool loong_format) {
    std::vector<EvalInstance> dataset = loong_format
                                            ? load_loong_jsonl(dataset_path, "")
                                            : load_dataset_jsonl(dataset_path);
    if (dataset.empty()) throw validation_error("dataset is empty: " + dataset_path);

    std::vector<SystemKind> systems;
    if (system_names.empty()) {
        systems = all_systems();
    } else {
        for (const auto& name : system_names) systems.push_back(parse_system(name));
    }

    ProviderMaker maker = [this](std::shared_ptr<TraceSink> sink) {
        return fresh_providers(std::move(sink));
    };
    EvalReport report = evaluate(systems, dataset, config_, prompts_, maker);
    return nlohmann::json{{"report", report.to_json()},
                          {"table", report.to_table()},
                          {"csv", report.to_csv()}};
}

nlohmann::json Engine::trace_summary(const std::string& trace_path) const {
    RunTrace trace = read_trace_jsonl(trace_path);

    std::map<std::string, nlohmann::json> per_role;
    for (const auto& e : trace) {
        auto& row = per_role[role_name(e.role)];
        if (row.is_null()) {
            row = {{"calls", 0}, {"failed", 0}, {"input_tokens", 0}, {"output_tokens", 0}};
        }
        row["calls"] = row["calls"].get<std::size_t>() + 1;
        if (!e.ok) row["failed"] = row["failed"].get<std::size_t>() + 1;
        row["input_tokens"] = row["input_tokens"].get<std::size_t>() + e.input_tokens;
        row["output_tokens"] = row["output_tokens"].get<std::size_t>() + e.output_tokens;
    }

    nlohmann::json j{{"entries", trace.size()},
                     {"input_tokens", total_input_tokens(trace)},
                     {"output_tokens", total_output_tokens(trace)},
                     {"per_role", nlohmann::json::object()}};
    for (const auto& [role, row] : per_role) j["per_role"][role] = row;
    try {
        j["cost"] = compute_cost(trace, config_.providers.pricing);
    } catch (const Error& e) {
        j["cost_error"] = e.what();
    }
    if (!trace.empty()) {
        double first = trace.front().started_at;
        double last = trace.front().finished_at;
        for (const auto& e : trace) {
            first = std::min(first, e.started_at);
            last = std::max(last, e.finished_at);
        }
        j["span_seconds"] = last - first;
    }
    return j;
}

}  // namespace spdrag
