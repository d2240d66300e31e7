// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "spdrag/providers.hpp"

namespace spdrag {

// Pulls the first JSON object out of a model reply, tolerating code fences
// and surrounding prose. Returns nullopt when nothing parses.
std::optional<nlohmann::json> extract_json_object(std::string_view text);

// Validates a parsed object against a named schema ("write_todos" or
// "agent_action"). Returns an error description, or nullopt when valid.
std::optional<std::string> validate_schema(const std::string& schema,
                                           const nlohmann::json& value);

// Enforces structured output on top of any chat backend: parse the reply,
// validate, and on failure re-ask once with a corrective instruction before
// giving up. Requests without a schema pass through untouched.
class SchemaValidatingChat final : public ChatProvider {
public:
    explicit SchemaValidatingChat(std::shared_ptr<ChatProvider> inner)
        : inner_(std::move(inner)) {}

    ChatResponse chat(const ChatRequest& request, const TraceCtx& ctx) override;

private:
    std::shared_ptr<ChatProvider> inner_;
};

}  // namespace spdrag
