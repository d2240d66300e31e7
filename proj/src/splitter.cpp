// SPDX-License-Identifier: Apache-2.0
#include "spdrag/splitter.hpp"

#include <cctype>

#include "spdrag/error.hpp"

namespace spdrag {

namespace {

std::vector<std::string> split_lines_keep_newline(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') {
            lines.emplace_back(text.substr(start, i - start + 1));
            start = i + 1;
        }
    }
    if (start < text.size()) lines.emplace_back(text.substr(start));
    return lines;
}

bool is_atx_heading(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && line[i] == '#') ++i;
    return i >= 1 && i <= 6 && i < line.size() && line[i] == ' ';
}

bool is_fence(std::string_view line) {
    std::string_view t = line;
    while (!t.empty() && (t.back() == '\n' || t.back() == '\r')) t.remove_suffix(1);
    return t.size() >= 3 && (t.substr(0, 3) == "```" || t.substr(0, 3) == "~~~");
}

bool is_horizontal_rule(std::string_view line) {
    char mark = 0;
    std::size_t count = 0;
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
        if (c != '-' && c != '*' && c != '_') return false;
        if (mark == 0) mark = c;
        if (c != mark) return false;
        ++count;
    }
    return count >= 3;
}

bool is_blank(std::string_view line) {
    for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

enum Level : int {
    kHeading = 0,
    kFence,
    kRule,
    kBlankLine,
    kNewline,
    kSpace,
    kCharacter,
};

// Every segmenter partitions its input exactly: concatenating the returned
// segments reproduces the input byte for byte.
std::vector<std::string> segment_at(std::string_view text, int level) {
    std::vector<std::string> segments;
    switch (level) {
        case kHeading: {
            auto lines = split_lines_keep_newline(text);
            std::string cur;
            for (const auto& line : lines) {
                if (is_atx_heading(line) && !cur.empty()) {
                    segments.push_back(cur);
                    cur.clear();
                }
                cur += line;
            }
            if (!cur.empty()) segments.push_back(cur);
            break;
        }
        case kFence: {
            auto lines = split_lines_keep_newline(text);
            std::string cur;
            bool in_fence = false;
            for (const auto& line : lines) {
                if (!in_fence && is_fence(line)) {
                    if (!cur.empty()) {
                        segments.push_back(cur);
                        cur.clear();
                    }
                    in_fence = true;
                    cur += line;
                } else if (in_fence && is_fence(line)) {
                    cur += line;
                    segments.push_back(cur);
                    cur.clear();
                    in_fence = false;
                } else {
                    cur += line;
                }
            }
            if (!cur.empty()) segments.push_back(cur);
            break;
        }
        case kRule: {
            auto lines = split_lines_keep_newline(text);
            std::string cur;
            for (const auto& line : lines) {
                if (is_horizontal_rule(line)) {
                    if (!cur.empty()) {
                        segments.push_back(cur);
                        cur.clear();
                    }
                    segments.push_back(line);
                } else {
                    cur += line;
                }
            }
            if (!cur.empty()) segments.push_back(cur);
            break;
        }
        case kBlankLine: {
            auto lines = split_lines_keep_newline(text);
            std::string cur;
            bool in_blank_run = false;
            for (const auto& line : lines) {
                bool blank = is_blank(line);
                if (in_blank_run && !blank && !cur.empty()) {
                    segments.push_back(cur);
                    cur.clear();
                }
                in_blank_run = blank;
                cur += line;
            }
            if (!cur.empty()) segments.push_back(cur);
            break;
        }
        case kNewline: {
            for (auto& line : split_lines_keep_newline(text)) segments.push_back(std::move(line));
            break;
        }
        case kSpace: {
            std::size_t start = 0;
            std::size_t i = 0;
            while (i < text.size()) {
                if (text[i] == ' ') {
                    while (i < text.size() && text[i] == ' ') ++i;
                    segments.emplace_back(text.substr(start, i - start));
                    start = i;
                } else {
                    ++i;
                }
            }
            if (start < text.size()) segments.emplace_back(text.substr(start));
            break;
        }
        case kCharacter:
        default: {
            for (char c : text) segments.emplace_back(1, c);
            break;
        }
    }
    return segments;
}

void collect_units(std::string_view text, int level, std::size_t chunk_size,
                   const TokenCounter& counter, std::vector<std::string>& out) {
    if (text.empty()) return;
    if (counter.count(text) <= chunk_size || level > kCharacter) {
        out.emplace_back(text);
        return;
    }
    auto segments = segment_at(text, level);
    if (segments.size() <= 1) {
        collect_units(text, level + 1, chunk_size, counter, out);
        return;
    }
    for (const auto& segment : segments) {
        if (counter.count(segment) <= chunk_size) {
            out.push_back(segment);
        } else {
            collect_units(segment, level + 1, chunk_size, counter, out);
        }
    }
}

std::string concat(const std::vector<std::string>& parts, std::size_t begin, std::size_t end) {
    std::string out;
    std::size_t bytes = 0;
    for (std::size_t i = begin; i < end; ++i) bytes += parts[i].size();
    out.reserve(bytes);
    for (std::size_t i = begin; i < end; ++i) out += parts[i];
    return out;
}

}  // namespace

std::size_t count_tokens(std::string_view text, const TokenCounter& counter) {
    return counter.count(text);
}

std::vector<std::string> split_units(std::string_view text, std::size_t chunk_size,
                                     const TokenCounter& counter) {
    std::vector<std::string> units;
    collect_units(text, kHeading, chunk_size, counter, units);
    return units;
}

std::vector<Chunk> split_document(const Document& doc, const SplitOptions& options,
                                  const TokenCounter& counter) {
    if (doc.text.empty()) throw validation_error("empty document");
    if (options.chunk_size < 1) throw config_error("chunk_size must be >= 1");
    if (options.chunk_overlap >= options.chunk_size) {
        throw config_error("chunk_overlap must be smaller than chunk_size");
    }

    auto units = split_units(doc.text, options.chunk_size, counter);

    std::vector<Chunk> chunks;
    std::vector<std::string> cur;       // units of the chunk being built
    std::string cur_text;
    std::size_t cur_overlap_chars = 0;  // bytes of cur copied from the previous chunk

    auto close_chunk = [&]() {
        Chunk chunk;
        chunk.doc_id = doc.id;
        chunk.seq = chunks.size();
        chunk.text = cur_text;
        chunk.token_count = counter.count(cur_text);
        chunk.overlap_chars = cur_overlap_chars;
        chunks.push_back(std::move(chunk));
    };

    for (const auto& unit : units) {
        if (cur.empty()) {
            cur.push_back(unit);
            cur_text = unit;
            continue;
        }
        if (counter.count(cur_text + unit) <= options.chunk_size) {
            cur.push_back(unit);
            cur_text += unit;
            continue;
        }
        close_chunk();

        // Overlap: trailing whole units of the closed chunk, greedily from the
        // end, kept within chunk_overlap tokens and the chunk budget.
        std::size_t tail_begin = cur.size();
        while (tail_begin > 0) {
            std::string candidate = concat(cur, tail_begin - 1, cur.size());
            if (counter.count(candidate) > options.chunk_overlap) break;
            --tail_begin;
        }
        std::vector<std::string> next(cur.begin() + static_cast<std::ptrdiff_t>(tail_begin),
                                      cur.end());
        next.push_back(unit);
        while (next.size() > 1 &&
               counter.count(concat(next, 0, next.size())) > options.chunk_size) {
            next.erase(next.begin());
        }
        cur = std::move(next);
        cur_text = concat(cur, 0, cur.size());
        cur_overlap_chars = cur_text.size() - unit.size();
    }
    if (!cur.empty()) close_chunk();
    return chunks;
}

}  // namespace spdrag
