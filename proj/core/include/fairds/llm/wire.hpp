// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/llm/types.hpp>

#include <nlohmann/json.hpp>

namespace fairds::llm
{

/// Chat-completions wire format (the de-facto `/chat/completions` schema).

auto to_json(const ChatMessage& message) -> nlohmann::json;
auto message_from_json(const nlohmann::json& j) -> ChatMessage;

auto to_json(const ToolDefinition& tool) -> nlohmann::json;
auto tool_from_json(const nlohmann::json& j) -> ToolDefinition;

/// `{"model": ..., "messages": [...]}`
auto to_json(const Conversation& conv) -> nlohmann::json;
auto conversation_from_json(const nlohmann::json& j) -> Conversation;

struct SamplingOptions
{
    double temperature = 0.0;
    std::optional<std::int64_t> max_tokens;
};

auto make_request(const Conversation& conv, const std::vector<ToolDefinition>& tools, const SamplingOptions& sampling)
    -> nlohmann::json;

/// Reads the first choice of a chat-completions response body.
/// Throws MalformedResponse.
auto parse_response(const nlohmann::json& body) -> BackendResponse;

} // namespace fairds::llm
