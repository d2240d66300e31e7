// SPDX-License-Identifier: Apache-2.0
#include "spdrag/tokenizer.hpp"

#include <cctype>
#include <limits>

#include "spdrag/error.hpp"

namespace spdrag {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::size_t WhitespaceTokenCounter::count(std::string_view text) const {
    std::size_t n = 0;
    bool in_word = false;
    for (char c : text) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++n;
        }
    }
    return n;
}

BpeTokenCounter::BpeTokenCounter() : BpeTokenCounter(builtin_bpe_merges()) {}

BpeTokenCounter::BpeTokenCounter(const std::vector<BpePair>& merges) {
    rank_.reserve(merges.size());
    for (std::size_t i = 0; i < merges.size(); ++i) {
        rank_.emplace(merges[i].left + merges[i].right, static_cast<int>(i));
    }
}

std::vector<std::string> BpeTokenCounter::pretokenize(std::string_view text) {
    std::vector<std::string> segments;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (text[i] == ' ' && i + 1 < n && !is_space(text[i + 1])) {
            std::size_t j = i + 1;
            while (j < n && !is_space(text[j])) ++j;
            segments.emplace_back(text.substr(i, j - i));
            i = j;
        } else if (is_space(text[i])) {
            std::size_t j = i;
            while (j < n && is_space(text[j])) ++j;
            // leave one plain space to attach to a following word
            if (j < n && text[j - 1] == ' ' && j - i > 1) --j;
            segments.emplace_back(text.substr(i, j - i));
            i = j;
        } else {
            std::size_t j = i;
            while (j < n && !is_space(text[j])) ++j;
            segments.emplace_back(text.substr(i, j - i));
            i = j;
        }
    }
    return segments;
}

std::vector<std::string> BpeTokenCounter::encode_segment(std::string_view segment) const {
    std::vector<std::string> tokens;
    tokens.reserve(segment.size());
    for (char c : segment) tokens.emplace_back(1, c);

    while (tokens.size() > 1) {
        int best_rank = std::numeric_limits<int>::max();
        std::size_t best_pos = 0;
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
            auto it = rank_.find(tokens[i] + tokens[i + 1]);
            if (it != rank_.end() && it->second < best_rank) {
                best_rank = it->second;
                best_pos = i;
            }
        }
        if (best_rank == std::numeric_limits<int>::max()) break;
        tokens[best_pos] += tokens[best_pos + 1];
        tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(best_pos) + 1);
    }
    return tokens;
}

std::size_t BpeTokenCounter::count(std::string_view text) const {
    std::size_t total = 0;
    for (const auto& segment : pretokenize(text)) {
        total += encode_segment(segment).size();
    }
    return total;
}

std::shared_ptr<TokenCounter> make_token_counter(const std::string& name) {
    if (name == "whitespace") return std::make_shared<WhitespaceTokenCounter>();
    if (name == "bpe") return std::make_shared<BpeTokenCounter>();
    throw config_error("unknown tokenizer: " + name);
}

}  // namespace spdrag
