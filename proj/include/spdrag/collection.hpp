// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spdrag/document.hpp"

namespace spdrag {

struct Embedding {
    std::vector<double> values;
    double norm = 0.0;

    std::size_t dimension() const { return values.size(); }
};

// Computes the Euclidean norm and rejects zero vectors.
Embedding make_embedding(std::vector<double> values);

double cosine_similarity(const Embedding& a, const Embedding& b);

struct IndexedChunk {
    Chunk chunk;
    Embedding embedding;
};

struct ScoredChunk {
    Chunk chunk;
    double score = 0.0;
};

class EmbeddingProvider;

// Exact brute-force cosine index. Immutable after build; concurrent searches
// are safe. Per-document collections carry the owning doc_id; a global
// collection over several documents leaves doc_id empty.
class Collection {
public:
    Collection() = default;
    Collection(std::string doc_id, std::size_t dimension, std::vector<IndexedChunk> items);

    const std::string& doc_id() const { return doc_id_; }
    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const std::vector<IndexedChunk>& items() const { return items_; }

    // Top-k by cosine similarity, ties broken by (doc_id, seq) ascending.
    // Returns min(k, size) results; an empty collection yields no results.
    std::vector<ScoredChunk> search(const Embedding& query, std::size_t k) const;

    void save(const std::string& path) const;
    static Collection load(const std::string& path);

private:
    std::string doc_id_;
    std::size_t dimension_ = 0;
    std::vector<IndexedChunk> items_;
};

// Embeds all chunk texts and assembles a collection. For a per-document
// collection every chunk must share one doc_id.
Collection build_collection(const std::vector<Chunk>& chunks, EmbeddingProvider& embedder);

}  // namespace spdrag
