// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace spdrag {

// Token counting is injected everywhere a budget or a metric needs it, so the
// whole pipeline can run against the cheap deterministic counter in tests.
class TokenCounter {
public:
    virtual ~TokenCounter() = default;
    virtual std::string name() const = 0;
    virtual std::size_t count(std::string_view text) const = 0;
};

// Counts whitespace-separated words. count("") == 0.
class WhitespaceTokenCounter final : public TokenCounter {
public:
    std::string name() const override { return "whitespace"; }
    std::size_t count(std::string_view text) const override;
};

struct BpePair {
    std::string left;
    std::string right;
};

// Built-in merge table, generated offline; see bpe_data.cpp.
const std::vector<BpePair>& builtin_bpe_merges();

// Byte-pair counter: pre-tokenizes on whitespace (a single leading space
// attaches to the following word), then applies merges in rank order inside
// each pre-token. Unknown bytes fall back to single-byte tokens.
class BpeTokenCounter final : public TokenCounter {
public:
    BpeTokenCounter();
    explicit BpeTokenCounter(const std::vector<BpePair>& merges);

    std::string name() const override { return "bpe"; }
    std::size_t count(std::string_view text) const override;

    // Token sequence for one pre-token segment (exposed for tests).
    std::vector<std::string> encode_segment(std::string_view segment) const;

    static std::vector<std::string> pretokenize(std::string_view text);

private:
    std::unordered_map<std::string, int> rank_;
};

std::shared_ptr<TokenCounter> make_token_counter(const std::string& name);

}  // namespace spdrag
