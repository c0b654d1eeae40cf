// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/error.hpp>

#include <chrono>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fairds::llm
{

enum class Role
{
    System,
    User,
    Assistant,
    Tool,
};

auto to_string(Role role) -> std::string_view;
auto role_from_string(std::string_view name) -> Role;

struct ToolCall
{
    std::string id;
    std::string name;
    /// JSON object text, exactly as produced by the model.
    std::string arguments;

    auto operator==(const ToolCall&) const -> bool = default;
};

struct ChatMessage
{
    Role role = Role::User;
    std::string content;
    std::vector<ToolCall> tool_calls;       ///< Assistant only
    std::optional<std::string> tool_call_id; ///< Tool only

    static auto system(std::string content) -> ChatMessage;
    static auto user(std::string content) -> ChatMessage;
    static auto assistant(std::string content) -> ChatMessage;
    static auto assistant_calls(std::vector<ToolCall> calls) -> ChatMessage;
    static auto tool(std::string call_id, std::string content) -> ChatMessage;

    auto operator==(const ChatMessage&) const -> bool = default;
};

enum class ParameterType
{
    String,
    Number,
    Boolean,
};

auto to_string(ParameterType type) -> std::string_view;

struct ToolParameter
{
    std::string name;
    ParameterType type = ParameterType::String;
    std::string description;
    bool required = true;

    auto operator==(const ToolParameter&) const -> bool = default;
};

struct ToolDefinition
{
    std::string name;
    std::string description;
    std::vector<ToolParameter> parameters;

    auto operator==(const ToolDefinition&) const -> bool = default;
};

struct Usage
{
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;

    auto operator==(const Usage&) const -> bool = default;
};

struct BackendResponse
{
    std::variant<std::string, std::vector<ToolCall>> content;
    /// Reported by the backend; never estimated.
    std::optional<Usage> usage;
    std::chrono::milliseconds latency { 0 };

    [[nodiscard]] auto is_text() const noexcept -> bool { return content.index() == 0; }
    [[nodiscard]] auto text() const -> const std::string& { return std::get<std::string>(content); }
    [[nodiscard]] auto tool_calls() const -> const std::vector<ToolCall>& { return std::get<1>(content); }
    /// The assistant message this response becomes in a transcript.
    [[nodiscard]] auto to_message() const -> ChatMessage;
};

struct Conversation
{
    std::vector<ChatMessage> messages;
    std::string model_id;

    auto operator==(const Conversation&) const -> bool = default;
};

/// Checks the structural invariants: a system message only at index 0, tool
/// messages answering an earlier tool call, no empty content without tool
/// calls, no two assistant messages in a row. Throws InvalidConversation.
void check_conversation(const Conversation& conv);

/// True when `name` matches `[a-zA-Z0-9_-]+`.
auto is_valid_tool_name(std::string_view name) noexcept -> bool;

class InvalidConversation: public Error
{
  public:
    explicit InvalidConversation(const std::string& detail): Error("invalid_conversation", detail) {}
};

class BackendUnavailable: public Error
{
  public:
    explicit BackendUnavailable(const std::string& detail): Error("backend_unavailable", detail) {}
};

class RateLimited: public Error
{
  public:
    explicit RateLimited(std::optional<std::chrono::seconds> retry_after);
    [[nodiscard]] auto retry_after() const noexcept -> std::optional<std::chrono::seconds> { return _retry_after; }

  private:
    std::optional<std::chrono::seconds> _retry_after;
};

class MalformedResponse: public Error
{
  public:
    explicit MalformedResponse(const std::string& detail): Error("malformed_response", detail) {}
};

class ContextTooLong: public Error
{
  public:
    explicit ContextTooLong(const std::string& detail): Error("context_too_long", detail) {}
};

} // namespace fairds::llm
