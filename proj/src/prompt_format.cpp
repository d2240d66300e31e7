// SPDX-License-Identifier: Apache-2.0
#include "spdrag/prompt_format.hpp"

#include <sstream>

#include "spdrag/strings.hpp"

namespace spdrag::promptfmt {

namespace {

std::vector<std::string> sections_between(std::string_view content, std::string_view open,
                                          std::string_view close) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t begin = content.find(open, pos);
        if (begin == std::string_view::npos) break;
        std::size_t body = content.find('\n', begin);
        if (body == std::string_view::npos) break;
        ++body;
        std::size_t end = content.find(close, body);
        if (end == std::string_view::npos) break;
        std::string_view text = content.substr(body, end - body);
        while (!text.empty() && text.back() == '\n') text.remove_suffix(1);
        out.emplace_back(text);
        pos = end + close.size();
    }
    return out;
}

}  // namespace

std::string agent_user_content(const std::string& query, const std::vector<std::string>& tasks,
                               const std::vector<std::string>& evidence_blocks,
                               bool force_finalize) {
    std::ostringstream out;
    out << "User query:\n" << query << "\n\n";
    out << "Assigned tasks:\n";
    if (tasks.empty()) {
        out << "(answer the user query directly)\n";
    } else {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            out << (i + 1) << ". " << tasks[i] << "\n";
        }
    }
    out << "\nEvidence gathered so far:\n";
    if (evidence_blocks.empty()) {
        out << "(none yet)\n";
    } else {
        for (const auto& block : evidence_blocks) out << block;
    }
    if (force_finalize) {
        out << "\n" << kForcedFinalizeLine << "\n";
    }
    return out.str();
}

std::string evidence_block(std::size_t search_no, const std::string& search_query,
                           const std::vector<ScoredChunk>& results) {
    std::ostringstream out;
    out << "[Search " << search_no << ": " << search_query << "]\n";
    if (results.empty()) {
        out << "(no results)\n";
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        out << "[Result " << search_no << "." << (i + 1) << " doc=" << r.chunk.doc_id
            << " seq=" << r.chunk.seq << "]\n"
            << r.chunk.text << "\n[End result]\n";
    }
    return out.str();
}

std::string findings_section(const std::string& id, const std::string& text) {
    return "[Findings " + id + "]\n" + text + "\n[End findings]\n";
}

std::string context_section(const std::string& meta, const std::string& text) {
    return "[Context " + meta + "]\n" + text + "\n[End context]\n";
}

std::size_t count_search_blocks(std::string_view user_content) {
    std::size_t n = 0;
    std::size_t pos = 0;
    while ((pos = user_content.find("[Search ", pos)) != std::string_view::npos) {
        ++n;
        pos += 8;
    }
    return n;
}

std::vector<std::string> parse_tasks(std::string_view user_content) {
    std::vector<std::string> tasks;
    std::size_t header = user_content.find("Assigned tasks:\n");
    if (header == std::string_view::npos) return tasks;
    std::size_t pos = header + 16;
    while (pos < user_content.size()) {
        std::size_t eol = user_content.find('\n', pos);
        if (eol == std::string_view::npos) eol = user_content.size();
        std::string_view line = user_content.substr(pos, eol - pos);
        std::size_t dot = line.find(". ");
        bool numbered = dot != std::string_view::npos && dot > 0;
        if (numbered) {
            for (std::size_t i = 0; i < dot; ++i) {
                if (line[i] < '0' || line[i] > '9') {
                    numbered = false;
                    break;
                }
            }
        }
        if (!numbered) break;
        tasks.emplace_back(trim(line.substr(dot + 2)));
        pos = eol + 1;
    }
    return tasks;
}

std::vector<std::string> parse_evidence_texts(std::string_view user_content) {
    return sections_between(user_content, "[Result ", "[End result]");
}

bool has_forced_finalize(std::string_view user_content) {
    return user_content.find(kForcedFinalizeLine) != std::string_view::npos;
}

std::vector<std::pair<std::string, std::string>> parse_findings_sections(
    std::string_view content) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t begin = content.find("[Findings ", pos);
        if (begin == std::string_view::npos) break;
        std::size_t id_end = content.find("]\n", begin);
        if (id_end == std::string_view::npos) break;
        std::string id(content.substr(begin + 10, id_end - begin - 10));
        std::size_t body = id_end + 2;
        std::size_t end = content.find("[End findings]", body);
        if (end == std::string_view::npos) break;
        std::string_view text = content.substr(body, end - body);
        while (!text.empty() && text.back() == '\n') text.remove_suffix(1);
        out.emplace_back(std::move(id), std::string(text));
        pos = end + 14;
    }
    return out;
}

std::vector<std::string> parse_context_texts(std::string_view content) {
    return sections_between(content, "[Context ", "[End context]");
}

}  // namespace spdrag::promptfmt
