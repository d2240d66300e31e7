// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace oracles {

std::vector<std::size_t> brute_force_top_k(const std::vector<std::vector<double>>& vectors,
                                           const std::vector<std::string>& doc_ids,
                                           const std::vector<std::size_t>& seqs,
                                           const std::vector<double>& query, std::size_t k) {
    double qnorm = 0.0;
    for (double v : query) qnorm += v * v;
    qnorm = std::sqrt(qnorm);

    std::vector<double> scores(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        double dot = 0.0;
        double norm = 0.0;
        for (std::size_t d = 0; d < vectors[i].size(); ++d) {
            dot += query[d] * vectors[i][d];
            norm += vectors[i][d] * vectors[i][d];
        }
        scores[i] = dot / (qnorm * std::sqrt(norm));
    }

    std::vector<std::size_t> order(vectors.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        if (doc_ids[a] != doc_ids[b]) return doc_ids[a] < doc_ids[b];
        return seqs[a] < seqs[b];
    });
    if (order.size() > k) order.resize(k);
    return order;
}

std::vector<RefMerge> reference_upgma(const std::vector<std::vector<double>>& distances) {
    std::size_t n = distances.size();
    std::vector<std::vector<std::size_t>> members;  // leaf sets per active cluster
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i) {
        members.push_back({i});
        ids.push_back(i);
    }

    std::vector<RefMerge> merges;
    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0;
        std::size_t bj = 1;
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                double sum = 0.0;
                for (std::size_t a : members[i]) {
                    for (std::size_t b : members[j]) sum += distances[a][b];
                }
                double avg = sum / static_cast<double>(members[i].size() * members[j].size());
                bool take = false;
                if (avg < best) {
                    take = true;
                } else if (avg == best) {
                    std::size_t lo = std::min(ids[i], ids[j]);
                    std::size_t hi = std::max(ids[i], ids[j]);
                    std::size_t cur_lo = std::min(ids[bi], ids[bj]);
                    std::size_t cur_hi = std::max(ids[bi], ids[bj]);
                    take = lo < cur_lo || (lo == cur_lo && hi < cur_hi);
                }
                if (take) {
                    best = avg;
                    bi = i;
                    bj = j;
                }
            }
        }
        RefMerge merge;
        merge.left = std::min(ids[bi], ids[bj]);
        merge.right = std::max(ids[bi], ids[bj]);
        merge.distance = best;
        merge.new_id = n + step;
        merges.push_back(merge);

        std::vector<std::size_t> joined = members[bi];
        joined.insert(joined.end(), members[bj].begin(), members[bj].end());
        members.erase(members.begin() + static_cast<std::ptrdiff_t>(bj));
        members.erase(members.begin() + static_cast<std::ptrdiff_t>(bi));
        ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(bj));
        ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(bi));
        members.push_back(std::move(joined));
        ids.push_back(merge.new_id);
    }
    return merges;
}

std::vector<WindowChunk> sliding_window_chunks(std::size_t total_tokens, std::size_t size,
                                               std::size_t overlap) {
    std::vector<WindowChunk> chunks;
    std::size_t step = size - overlap;
    std::size_t start = 0;
    while (true) {
        WindowChunk chunk;
        chunk.start_token = start;
        chunk.token_count = std::min(size, total_tokens - start);
        chunks.push_back(chunk);
        if (start + size >= total_tokens) break;
        start += step;
    }
    return chunks;
}

std::vector<std::string> naive_bpe_encode(const std::vector<spdrag::BpePair>& merges,
                                          const std::string& segment) {
    std::vector<std::string> tokens;
    for (char c : segment) tokens.emplace_back(1, c);
    for (const auto& merge : merges) {
        std::vector<std::string> next;
        std::size_t i = 0;
        while (i < tokens.size()) {
            if (i + 1 < tokens.size() && tokens[i] == merge.left &&
                tokens[i + 1] == merge.right) {
                next.push_back(merge.left + merge.right);
                i += 2;
            } else {
                next.push_back(tokens[i]);
                ++i;
            }
        }
        tokens = std::move(next);
    }
    return tokens;
}

std::size_t naive_bpe_count(const spdrag::BpeTokenCounter& counter,
                            const std::vector<spdrag::BpePair>& merges,
                            const std::string& text) {
    std::size_t total = 0;
    for (const auto& segment : counter.pretokenize(text)) {
        total += naive_bpe_encode(merges, segment).size();
    }
    return total;
}

}  // namespace oracles
