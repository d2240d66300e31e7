// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spdrag/document.hpp"

namespace spdrag {

using FileErrors = std::vector<std::pair<std::string, std::string>>;  // (file, error)

// Directory of .txt/.md files (id = relative path, name = filename) or a
// JSONL file with one {id, name, text, metadata} object per line. With an
// error collector, unreadable files are recorded and skipped instead of
// aborting the load.
std::vector<Document> load_corpus(const std::string& path, FileErrors* errors = nullptr);
std::vector<Document> load_corpus_dir(const std::string& dir, FileErrors* errors = nullptr);
std::vector<Document> load_corpus_jsonl(const std::string& path);

// Chunk store: one JSONL file per document,
// {doc_id, seq, text, token_count, overlap_chars} per line.
void write_chunk_store(const std::vector<Chunk>& chunks, const std::string& path);
std::vector<Chunk> read_chunk_store(const std::string& path);

// Rebuilds the source text from its chunks (strip each chunk's leading
// overlap region, concatenate in seq order).
std::string reassemble_chunks(const std::vector<Chunk>& chunks);

}  // namespace spdrag
