// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only to check the production
// code. They deliberately avoid the library's own code paths.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spdrag/collection.hpp"
#include "spdrag/synthesis.hpp"
#include "spdrag/tokenizer.hpp"

namespace oracles {

// Exhaustive cosine ranking: score every vector, sort by (score desc,
// doc_id asc, seq asc), take k. Plain loops over the raw vectors.
std::vector<std::size_t> brute_force_top_k(const std::vector<std::vector<double>>& vectors,
                                           const std::vector<std::string>& doc_ids,
                                           const std::vector<std::size_t>& seqs,
                                           const std::vector<double>& query, std::size_t k);

// UPGMA computed from first principles: inter-cluster distance is recomputed
// every step as the mean over all leaf pairs of the ORIGINAL matrix.
struct RefMerge {
    std::size_t left = 0;
    std::size_t right = 0;
    double distance = 0.0;
    std::size_t new_id = 0;
};
std::vector<RefMerge> reference_upgma(const std::vector<std::vector<double>>& distances);

// Sliding-window chunking over the token stream: step = size - overlap,
// windows of `size` tokens. Only valid for structureless word streams.
struct WindowChunk {
    std::size_t start_token = 0;
    std::size_t token_count = 0;
};
std::vector<WindowChunk> sliding_window_chunks(std::size_t total_tokens, std::size_t size,
                                               std::size_t overlap);

// Byte-pair encoding by sequential merge passes: for each merge in rank
// order, replace all of its occurrences left to right, then move on. The
// production encoder instead repeatedly applies the lowest-ranked pair.
std::vector<std::string> naive_bpe_encode(const std::vector<spdrag::BpePair>& merges,
                                          const std::string& segment);
std::size_t naive_bpe_count(const spdrag::BpeTokenCounter& counter,
                            const std::vector<spdrag::BpePair>& merges,
                            const std::string& text);

}  // namespace oracles
