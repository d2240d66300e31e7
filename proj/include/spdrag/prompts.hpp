// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace spdrag {

// Prompt templates with {name} placeholders. The built-in set is compiled in;
// a prompt directory can override any template per file so they can be edited
// without rebuilding.
struct PromptLibrary {
    std::string coordinator;      // no placeholders; the query is the user turn
    std::string subagent;         // {file_name}
    std::string synthesis;        // {query}, {synthesis_directive}, {findings}
    std::string baseline_answer;  // context question answering
    std::string agentic;          // corpus-wide iterative agent
    std::string judge;            // {question}, {gold}, {predicted}

    static PromptLibrary builtin();

    // Reads <dir>/<name>.txt for each template that exists; missing files
    // keep the built-in text. An empty dir returns the built-ins.
    static PromptLibrary load(const std::string& dir);

    // Writes every template to <dir>/<name>.txt (used by tooling/packaging).
    void write(const std::string& dir) const;
};

}  // namespace spdrag
