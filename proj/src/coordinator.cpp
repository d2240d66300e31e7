// SPDX-License-Identifier: Apache-2.0
#include "spdrag/coordinator.hpp"

#include "spdrag/error.hpp"
#include "spdrag/strings.hpp"

namespace spdrag {

nlohmann::json TodoPlan::to_json() const {
    return nlohmann::json{{"sub_agent_todos", sub_agent_todos},
                          {"synthesis_directive", synthesis_directive},
                          {"warnings", warnings}};
}

TodoPlan TodoPlan::from_json(const nlohmann::json& j) {
    TodoPlan plan;
    plan.sub_agent_todos = j.at("sub_agent_todos").get<std::vector<std::string>>();
    plan.synthesis_directive = j.at("synthesis_directive").get<std::string>();
    if (j.contains("warnings")) plan.warnings = j.at("warnings").get<std::vector<std::string>>();
    return plan;
}

TodoPlan plan(const std::string& query, ChatProvider& chat, const PromptLibrary& prompts) {
    if (trim(query).empty()) throw validation_error("query must be non-empty");

    ChatRequest request;
    request.system_prompt = prompts.coordinator;
    request.user_content = query;
    request.response_schema = "write_todos";
    request.model_role = Role::coordinator;

    TraceCtx ctx{Role::coordinator, "coordinator", 0.0};
    ChatResponse response = chat.chat(request, ctx);
    if (!response.parsed) {
        throw provider_error("coordinator returned no structured plan");
    }

    TodoPlan plan;
    for (const auto& todo : (*response.parsed)["sub_agent_todos"]) {
        std::string text = trim(todo.get<std::string>());
        if (!text.empty()) plan.sub_agent_todos.push_back(std::move(text));
    }
    if (plan.sub_agent_todos.empty()) {
        throw validation_error("coordinator produced an empty todo list");
    }
    if (plan.sub_agent_todos.size() > kMaxTodos) {
        plan.warnings.push_back("todo list truncated from " +
                                std::to_string(plan.sub_agent_todos.size()) + " to " +
                                std::to_string(kMaxTodos));
        plan.sub_agent_todos.resize(kMaxTodos);
    }
    plan.synthesis_directive = trim((*response.parsed)["synthesis_directive"].get<std::string>());
    if (plan.synthesis_directive.empty()) {
        throw validation_error("coordinator produced an empty synthesis directive");
    }
    std::size_t sentences = sentence_count(plan.synthesis_directive);
    if (sentences < 2 || sentences > 4) {
        plan.warnings.push_back("synthesis directive has " + std::to_string(sentences) +
                                " sentences (expected 2-4)");
    }
    return plan;
}

}  // namespace spdrag
