// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spdrag/collection.hpp"
#include "spdrag/config.hpp"
#include "spdrag/document.hpp"
#include "spdrag/error.hpp"
#include "spdrag/mock_providers.hpp"
#include "spdrag/providers.hpp"
#include "spdrag/strings.hpp"

namespace testutil {

class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        static std::atomic<unsigned> counter{0};
        path_ = base / ("spdrag-test-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

    std::filesystem::path write(const std::string& name, const std::string& content) const {
        auto p = path_ / name;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream out(p);
        out << content;
        return p;
    }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Mock provider set over the whitespace counter, small dimension, fresh sink.
inline spdrag::ProviderSet mock_providers(std::uint64_t seed = 42, std::size_t dimension = 32) {
    spdrag::MockOptions options;
    options.seed = seed;
    options.dimension = dimension;
    options.models = spdrag::Config::defaults().providers.models;
    return spdrag::make_mock_providers(options);
}

inline spdrag::MockOptions mock_options(const spdrag::ProviderSet& set,
                                        std::uint64_t seed = 42, std::size_t dimension = 32) {
    spdrag::MockOptions options;
    options.seed = seed;
    options.dimension = dimension;
    options.models = spdrag::Config::defaults().providers.models;
    options.counter = set.counter;
    options.trace = set.trace;
    return options;
}

// Returns fixed vectors per call order; reused for zero-vector and
// orthogonal-geometry cases.
class ScriptedEmbedder final : public spdrag::EmbeddingProvider {
public:
    ScriptedEmbedder(std::size_t dimension,
                     std::vector<std::vector<double>> vectors_by_text_order)
        : dimension_(dimension), vectors_(std::move(vectors_by_text_order)) {}

    std::size_t dimension() const override { return dimension_; }

    std::vector<spdrag::Embedding> embed(const std::vector<std::string>& texts,
                                         const spdrag::TraceCtx&) override {
        std::vector<spdrag::Embedding> out;
        for (std::size_t i = 0; i < texts.size(); ++i) {
            const auto& values = vectors_.at((cursor_ + i) % vectors_.size());
            double sq = 0.0;
            for (double v : values) sq += v * v;
            out.push_back(spdrag::Embedding{values, std::sqrt(sq)});
        }
        cursor_ = (cursor_ + texts.size()) % vectors_.size();
        return out;
    }

private:
    std::size_t dimension_;
    std::vector<std::vector<double>> vectors_;
    std::size_t cursor_ = 0;
};

// Embeds by looking the text up in a fixed table; unknown texts get a
// deterministic fallback axis.
class TableEmbedder final : public spdrag::EmbeddingProvider {
public:
    TableEmbedder(std::size_t dimension,
                  std::map<std::string, std::vector<double>> table)
        : dimension_(dimension), table_(std::move(table)) {}

    std::size_t dimension() const override { return dimension_; }

    std::vector<spdrag::Embedding> embed(const std::vector<std::string>& texts,
                                         const spdrag::TraceCtx&) override {
        std::vector<spdrag::Embedding> out;
        for (const auto& text : texts) {
            std::vector<double> values;
            auto it = table_.find(text);
            if (it != table_.end()) {
                values = it->second;
            } else {
                values.assign(dimension_, 0.0);
                values[spdrag::fnv1a64(text) % dimension_] = 1.0;
            }
            out.push_back(spdrag::make_embedding(values));
        }
        return out;
    }

private:
    std::size_t dimension_;
    std::map<std::string, std::vector<double>> table_;
};

// Delegates to an inner chat but fails every request whose system prompt
// mentions the poisoned document name.
class PoisonedChat final : public spdrag::ChatProvider {
public:
    PoisonedChat(std::shared_ptr<spdrag::ChatProvider> inner, std::string poison_marker)
        : inner_(std::move(inner)), marker_(std::move(poison_marker)) {}

    spdrag::ChatResponse chat(const spdrag::ChatRequest& request,
                              const spdrag::TraceCtx& ctx) override {
        if (request.system_prompt.find(marker_) != std::string::npos) {
            throw spdrag::provider_error("poisoned provider for " + marker_);
        }
        return inner_->chat(request, ctx);
    }

private:
    std::shared_ptr<spdrag::ChatProvider> inner_;
    std::string marker_;
};

inline std::string words_doc(std::size_t n, const std::string& prefix = "w") {
    std::ostringstream out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out << ' ';
        out << prefix << i;
    }
    return out.str();
}

inline spdrag::Document make_doc(const std::string& id, const std::string& text) {
    spdrag::Document doc;
    doc.id = id;
    doc.name = id;
    doc.text = text;
    return doc;
}

}  // namespace testutil
