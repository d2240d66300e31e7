// SPDX-License-Identifier: Apache-2.0
#include "spdrag/corpus_store.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spdrag/error.hpp"
#include "spdrag/strings.hpp"

namespace spdrag {

namespace fs = std::filesystem;

std::vector<Document> load_corpus(const std::string& path, FileErrors* errors) {
    if (fs::is_directory(path)) return load_corpus_dir(path, errors);
    if (fs::is_regular_file(path)) return load_corpus_jsonl(path);
    throw io_error("corpus path does not exist: " + path);
}

std::vector<Document> load_corpus_dir(const std::string& dir, FileErrors* errors) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        if (ext == ".txt" || ext == ".md" || ext == ".markdown") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<Document> docs;
    docs.reserve(files.size());
    for (const auto& file : files) {
        std::ifstream in(file);
        if (!in) {
            if (errors) {
                errors->emplace_back(file.string(), "cannot read corpus file");
                continue;
            }
            throw io_error("cannot read corpus file: " + file.string());
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        Document doc;
        doc.id = fs::relative(file, dir).generic_string();
        doc.name = file.filename().string();
        doc.text = buf.str();
        doc.metadata["source_path"] = file.string();
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<Document> load_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read corpus file: " + path);
    std::vector<Document> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) {
            throw io_error("corpus line " + std::to_string(line_no) + " is not a JSON object");
        }
        Document doc;
        doc.id = j.value("id", "doc-" + std::to_string(line_no));
        doc.name = j.value("name", doc.id);
        doc.text = j.value("text", "");
        if (j.contains("metadata") && j["metadata"].is_object()) {
            for (auto it = j["metadata"].begin(); it != j["metadata"].end(); ++it) {
                doc.metadata[it.key()] =
                    it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
            }
        }
        docs.push_back(std::move(doc));
    }
    for (std::size_t i = 0; i < docs.size(); ++i) {
        for (std::size_t j = i + 1; j < docs.size(); ++j) {
            if (docs[i].id == docs[j].id) {
                throw validation_error("duplicate document id in corpus: " + docs[i].id);
            }
        }
    }
    return docs;
}

void write_chunk_store(const std::vector<Chunk>& chunks, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write chunk store: " + path);
    for (const auto& chunk : chunks) {
        nlohmann::json j{{"doc_id", chunk.doc_id},
                         {"seq", chunk.seq},
                         {"text", chunk.text},
                         {"token_count", chunk.token_count},
                         {"overlap_chars", chunk.overlap_chars}};
        out << j.dump() << '\n';
    }
}

std::vector<Chunk> read_chunk_store(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read chunk store: " + path);
    std::vector<Chunk> chunks;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        Chunk chunk;
        chunk.doc_id = j.at("doc_id").get<std::string>();
        chunk.seq = j.at("seq").get<std::size_t>();
        chunk.text = j.at("text").get<std::string>();
        chunk.token_count = j.at("token_count").get<std::size_t>();
        chunk.overlap_chars = j.value("overlap_chars", std::size_t{0});
        chunks.push_back(std::move(chunk));
    }
    std::sort(chunks.begin(), chunks.end(),
              [](const Chunk& a, const Chunk& b) { return a.seq < b.seq; });
    return chunks;
}

std::string reassemble_chunks(const std::vector<Chunk>& chunks) {
    std::string text;
    for (const auto& chunk : chunks) {
        if (chunk.overlap_chars > chunk.text.size()) {
            throw validation_error("chunk overlap exceeds its text length");
        }
        text.append(chunk.text, chunk.seq == 0 ? 0 : chunk.overlap_chars,
                    std::string::npos);
    }
    return text;
}

}  // namespace spdrag
