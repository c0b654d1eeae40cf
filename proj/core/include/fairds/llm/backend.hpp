// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/llm/types.hpp>

#include <functional>
#include <map>
#include <memory>

#include <nlohmann/json_fwd.hpp>

namespace fairds::llm
{

/// A chat-completion provider. Implementations must tolerate concurrent
/// complete() calls.
class Backend
{
  public:
    virtual ~Backend() = default;
    virtual auto complete(const Conversation& conv, const std::vector<ToolDefinition>& tools) -> BackendResponse = 0;
    [[nodiscard]] virtual auto model_id() const -> std::string = 0;
};

/// Checks the conversation and asks the backend for the next message. The
/// conversation is taken by const reference and never modified.
auto complete(const Conversation& conv, const std::vector<ToolDefinition>& tools, Backend& backend) -> BackendResponse;

/// Runs named tools on behalf of the model.
class ToolExecutor
{
  public:
    virtual ~ToolExecutor() = default;
    /// Returns the tool message content. Throws UnknownTool for names it
    /// does not handle; any other exception is reported to the model.
    virtual auto execute(const ToolCall& call) -> std::string = 0;
};

class UnknownTool: public Error
{
  public:
    explicit UnknownTool(const std::string& name): Error("unknown_tool", "unknown tool: " + name) {}
};

/// Executor dispatching on tool name to registered handlers. Arguments are
/// parsed as a JSON object before the handler runs.
class ToolRegistry: public ToolExecutor
{
  public:
    using Handler = std::function<std::string(const nlohmann::json& arguments)>;

    void add(ToolDefinition definition, Handler handler);
    [[nodiscard]] auto definitions() const -> std::vector<ToolDefinition>;
    auto execute(const ToolCall& call) -> std::string override;

  private:
    std::map<std::string, std::pair<ToolDefinition, Handler>> _tools;
};

class MaxTurnsExceeded: public Error
{
  public:
    MaxTurnsExceeded(int turns, Conversation transcript);
    [[nodiscard]] auto transcript() const noexcept -> const Conversation& { return _transcript; }

  private:
    Conversation _transcript;
};

struct ToolLoopResult
{
    std::string final_text;
    Conversation transcript;
    int turns = 0;
    std::optional<Usage> usage;
};

/// Alternates backend turns and tool executions until the model answers with
/// text. Tool calls within one message run sequentially in listed order.
/// Unknown tools and failing tools become tool messages; each backend call
/// counts as one turn.
auto run_tool_loop(Conversation conv, const std::vector<ToolDefinition>& tools, ToolExecutor& executor, Backend& backend,
                   int max_turns) -> ToolLoopResult;

} // namespace fairds::llm
