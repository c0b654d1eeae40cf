// SPDX-License-Identifier: Apache-2.0
#include <fairds/llm/types.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <set>

namespace fairds::llm
{

auto to_string(Role role) -> std::string_view
{
    switch (role)
    {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
        case Role::Tool: return "tool";
    }
    return "";
}

auto role_from_string(std::string_view name) -> Role
{
    for (auto const role: { Role::System, Role::User, Role::Assistant, Role::Tool })
    {
        if (to_string(role) == name)
            return role;
    }
    throw MalformedResponse(fmt::format("unknown message role '{}'", name));
}

auto to_string(ParameterType type) -> std::string_view
{
    switch (type)
    {
        case ParameterType::String: return "string";
        case ParameterType::Number: return "number";
        case ParameterType::Boolean: return "boolean";
    }
    return "";
}

auto ChatMessage::system(std::string content) -> ChatMessage
{
    return { Role::System, std::move(content), {}, {} };
}

auto ChatMessage::user(std::string content) -> ChatMessage
{
    return { Role::User, std::move(content), {}, {} };
}

auto ChatMessage::assistant(std::string content) -> ChatMessage
{
    return { Role::Assistant, std::move(content), {}, {} };
}

auto ChatMessage::assistant_calls(std::vector<ToolCall> calls) -> ChatMessage
{
    return { Role::Assistant, {}, std::move(calls), {} };
}

auto ChatMessage::tool(std::string call_id, std::string content) -> ChatMessage
{
    return { Role::Tool, std::move(content), {}, std::move(call_id) };
}

auto BackendResponse::to_message() const -> ChatMessage
{
    return is_text() ? ChatMessage::assistant(text()) : ChatMessage::assistant_calls(tool_calls());
}

RateLimited::RateLimited(std::optional<std::chrono::seconds> retry_after):
    Error("rate_limited", retry_after ? fmt::format("rate limited; retry after {} s", retry_after->count())
                                      : std::string("rate limited")),
    _retry_after(retry_after)
{
}

auto is_valid_tool_name(std::string_view name) noexcept -> bool
{
    return !name.empty() && std::ranges::all_of(name, [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    });
}

void check_conversation(const Conversation& conv)
{
    auto pending = std::set<std::string> {};
    for (std::size_t i = 0; i < conv.messages.size(); ++i)
    {
        auto const& m = conv.messages[i];
        if (m.role == Role::System && i != 0)
            throw InvalidConversation(fmt::format("system message at position {}; only the first may be a system message", i));
        if (!m.tool_calls.empty() && m.role != Role::Assistant)
            throw InvalidConversation(fmt::format("message {} carries tool calls but is not an assistant message", i));
        if (m.tool_call_id && m.role != Role::Tool)
            throw InvalidConversation(fmt::format("message {} carries a tool_call_id but is not a tool message", i));
        if (m.role == Role::Tool)
        {
            if (!m.tool_call_id || !pending.contains(*m.tool_call_id))
                throw InvalidConversation(fmt::format("tool message {} does not answer an earlier tool call", i));
        }
        else if (m.content.empty() && m.tool_calls.empty())
            throw InvalidConversation(fmt::format("message {} has neither content nor tool calls", i));
        if (m.role == Role::Assistant && i > 0 && conv.messages[i - 1].role == Role::Assistant)
            throw InvalidConversation(fmt::format("assistant messages {} and {} are not separated by a user or tool turn", i - 1, i));
        for (const auto& call: m.tool_calls)
            pending.insert(call.id);
    }
}

} // namespace fairds::llm
