// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "spdrag/prompts.hpp"
#include "spdrag/providers.hpp"

namespace spdrag {

struct TodoPlan {
    std::vector<std::string> sub_agent_todos;
    std::string synthesis_directive;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
    static TodoPlan from_json(const nlohmann::json& j);
};

// Maximum number of todos kept after validation; overflow is truncated with
// a warning so worker prompts stay bounded.
inline constexpr std::size_t kMaxTodos = 12;

// One structured chat call that decomposes the query into the shared task
// list and the synthesis directive. The coordinator never sees document
// names or content: the request carries only the template and the query.
TodoPlan plan(const std::string& query, ChatProvider& chat, const PromptLibrary& prompts);

}  // namespace spdrag
