// SPDX-License-Identifier: Apache-2.0
#include "spdrag/collection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "spdrag/error.hpp"
#include "spdrag/providers.hpp"

namespace spdrag {

namespace {

constexpr int kCollectionFormatVersion = 1;

}  // namespace

Embedding make_embedding(std::vector<double> values) {
    double sq = 0.0;
    for (double v : values) sq += v * v;
    double norm = std::sqrt(sq);
    if (!(norm > 0.0)) throw validation_error("zero-norm embedding rejected");
    return Embedding{std::move(values), norm};
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
    if (a.dimension() != b.dimension()) {
        throw validation_error("embedding dimension mismatch: " +
                               std::to_string(a.dimension()) + " vs " +
                               std::to_string(b.dimension()));
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
    return dot / (a.norm * b.norm);
}

Collection::Collection(std::string doc_id, std::size_t dimension,
                       std::vector<IndexedChunk> items)
    : doc_id_(std::move(doc_id)), dimension_(dimension), items_(std::move(items)) {
    for (const auto& item : items_) {
        if (item.embedding.dimension() != dimension_) {
            throw validation_error("collection dimension mismatch");
        }
    }
}

std::vector<ScoredChunk> Collection::search(const Embedding& query, std::size_t k) const {
    if (k < 1) throw validation_error("k must be >= 1");
    if (items_.empty()) return {};
    if (query.dimension() != dimension_) {
        throw validation_error("query dimension " + std::to_string(query.dimension()) +
                               " does not match collection dimension " +
                               std::to_string(dimension_));
    }

    std::vector<std::size_t> order(items_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<double> scores(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
        scores[i] = cosine_similarity(query, items_[i].embedding);
    }

    auto better = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        const Chunk& ca = items_[a].chunk;
        const Chunk& cb = items_[b].chunk;
        if (ca.doc_id != cb.doc_id) return ca.doc_id < cb.doc_id;
        return ca.seq < cb.seq;
    };

    std::size_t take = std::min(k, items_.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                      order.end(), better);

    std::vector<ScoredChunk> results;
    results.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        results.push_back(ScoredChunk{items_[order[i]].chunk, scores[order[i]]});
    }
    return results;
}

void Collection::save(const std::string& path) const {
    nlohmann::json j;
    j["version"] = kCollectionFormatVersion;
    j["dimension"] = dimension_;
    j["doc_id"] = doc_id_;
    auto& chunks = j["chunks"] = nlohmann::json::array();
    auto& vectors = j["vectors"] = nlohmann::json::array();
    for (const auto& item : items_) {
        chunks.push_back({{"doc_id", item.chunk.doc_id},
                          {"seq", item.chunk.seq},
                          {"text", item.chunk.text},
                          {"token_count", item.chunk.token_count},
                          {"overlap_chars", item.chunk.overlap_chars}});
        vectors.push_back(item.embedding.values);
    }
    std::ofstream out(path);
    if (!out) throw io_error("cannot write collection file: " + path);
    out << j.dump();
}

Collection Collection::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read collection file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw io_error("bad collection file " + path + ": " + e.what());
    }
    if (j.value("version", 0) != kCollectionFormatVersion) {
        throw io_error("unsupported collection format version in " + path);
    }
    std::size_t dimension = j.at("dimension").get<std::size_t>();
    std::string doc_id = j.at("doc_id").get<std::string>();
    const auto& chunks = j.at("chunks");
    const auto& vectors = j.at("vectors");
    if (chunks.size() != vectors.size()) {
        throw io_error("collection file corrupt (chunks/vectors mismatch): " + path);
    }
    std::vector<IndexedChunk> items;
    items.reserve(chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        Chunk chunk;
        chunk.doc_id = chunks[i].at("doc_id").get<std::string>();
        chunk.seq = chunks[i].at("seq").get<std::size_t>();
        chunk.text = chunks[i].at("text").get<std::string>();
        chunk.token_count = chunks[i].at("token_count").get<std::size_t>();
        chunk.overlap_chars = chunks[i].value("overlap_chars", std::size_t{0});
        items.push_back(IndexedChunk{std::move(chunk),
                                     make_embedding(vectors[i].get<std::vector<double>>())});
    }
    return Collection(std::move(doc_id), dimension, std::move(items));
}

Collection build_collection(const std::vector<Chunk>& chunks, EmbeddingProvider& embedder) {
    if (chunks.empty()) throw validation_error("cannot build a collection from zero chunks");

    std::vector<std::string> texts;
    texts.reserve(chunks.size());
    for (const auto& chunk : chunks) texts.push_back(chunk.text);

    TraceCtx ctx{Role::ingest, "ingest:" + chunks.front().doc_id, 0.0};
    std::vector<Embedding> embeddings;
    try {
        embeddings = embedder.embed(texts, ctx);
    } catch (const Error& e) {
        throw provider_error(std::string("embedding failed for chunks of ") +
                             chunks.front().doc_id + ": " + e.what());
    }
    if (embeddings.size() != chunks.size()) {
        throw provider_error("embedder returned a wrong number of vectors");
    }

    const std::string& doc_id = chunks.front().doc_id;
    bool single_doc = true;
    for (const auto& chunk : chunks) single_doc = single_doc && chunk.doc_id == doc_id;

    std::vector<IndexedChunk> items;
    items.reserve(chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        if (embeddings[i].dimension() != embedder.dimension()) {
            throw provider_error("embedding dimension mismatch at chunk " + std::to_string(i));
        }
        if (!(embeddings[i].norm > 0.0)) {
            throw validation_error("zero-norm embedding for chunk " + std::to_string(i) +
                                   " of " + chunks[i].doc_id);
        }
        items.push_back(IndexedChunk{chunks[i], std::move(embeddings[i])});
    }
    return Collection(single_doc ? doc_id : std::string{}, embedder.dimension(),
                      std::move(items));
}

}  // namespace spdrag
