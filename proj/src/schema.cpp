// SPDX-License-Identifier: Apache-2.0
#include "spdrag/schema.hpp"

#include "spdrag/error.hpp"

namespace spdrag {

std::optional<nlohmann::json> extract_json_object(std::string_view text) {
    std::size_t begin = text.find('{');
    std::size_t end = text.rfind('}');
    if (begin == std::string_view::npos || end == std::string_view::npos || end < begin) {
        return std::nullopt;
    }
    auto parsed = nlohmann::json::parse(text.substr(begin, end - begin + 1), nullptr,
                                        /*allow_exceptions=*/false);
    if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
    return parsed;
}

namespace {

bool non_empty_string(const nlohmann::json& j, const char* key) {
    return j.contains(key) && j[key].is_string() && !j[key].get<std::string>().empty();
}

std::optional<std::string> validate_write_todos(const nlohmann::json& value) {
    if (!value.contains("sub_agent_todos") || !value["sub_agent_todos"].is_array() ||
        value["sub_agent_todos"].empty()) {
        return "sub_agent_todos must be a non-empty array";
    }
    for (const auto& todo : value["sub_agent_todos"]) {
        if (!todo.is_string() || todo.get<std::string>().empty()) {
            return "every todo must be a non-empty string";
        }
    }
    if (!non_empty_string(value, "synthesis_directive")) {
        return "synthesis_directive must be a non-empty string";
    }
    return std::nullopt;
}

std::optional<std::string> validate_agent_action(const nlohmann::json& value) {
    if (!value.contains("action") || !value["action"].is_string()) {
        return "action must be \"search\" or \"finalize\"";
    }
    std::string action = value["action"].get<std::string>();
    if (action == "search") {
        if (!non_empty_string(value, "query")) return "search action requires a query";
        if (value.contains("findings") && !value["findings"].get<std::string>().empty()) {
            return "search action must not carry findings";
        }
        return std::nullopt;
    }
    if (action == "finalize") {
        if (!value.contains("findings") || !value["findings"].is_string() ||
            value["findings"].get<std::string>().empty()) {
            return "finalize action requires findings";
        }
        if (value.contains("query") && !value["query"].get<std::string>().empty()) {
            return "finalize action must not carry a search query";
        }
        if (!value.contains("relevance") || !value["relevance"].is_number()) {
            return "finalize action requires a numeric relevance";
        }
        double r = value["relevance"].get<double>();
        if (r < 0.0 || r > 1.0) return "relevance must lie in [0, 1]";
        return std::nullopt;
    }
    return "unknown action: " + action;
}

}  // namespace

std::optional<std::string> validate_schema(const std::string& schema,
                                           const nlohmann::json& value) {
    if (schema == "write_todos") return validate_write_todos(value);
    if (schema == "agent_action") return validate_agent_action(value);
    return "unknown response schema: " + schema;
}

ChatResponse SchemaValidatingChat::chat(const ChatRequest& request, const TraceCtx& ctx) {
    ChatResponse response = inner_->chat(request, ctx);
    if (!request.response_schema) return response;

    auto try_parse = [&](ChatResponse& r) -> std::optional<std::string> {
        auto parsed = extract_json_object(r.text);
        if (!parsed) return "reply is not a JSON object";
        auto err = validate_schema(*request.response_schema, *parsed);
        if (err) return err;
        r.parsed = std::move(*parsed);
        return std::nullopt;
    };

    auto first_error = try_parse(response);
    if (!first_error) return response;

    ChatRequest retry = request;
    retry.user_content +=
        "\n\nYour previous reply could not be parsed (" + *first_error +
        "). Reply again with ONLY the JSON object required by the schema.";
    ChatResponse second = inner_->chat(retry, ctx);
    auto second_error = try_parse(second);
    if (!second_error) return second;
    throw provider_error("structured output failed after re-ask: " + *second_error +
                         "; raw reply: " + second.text);
}

}  // namespace spdrag
