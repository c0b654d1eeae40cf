// SPDX-License-Identifier: Apache-2.0
#include <fairds/llm/backend.hpp>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace fairds::llm
{

auto complete(const Conversation& conv, const std::vector<ToolDefinition>& tools, Backend& backend) -> BackendResponse
{
    if (conv.messages.empty())
        throw InvalidConversation("cannot complete an empty conversation");
    check_conversation(conv);
    for (const auto& t: tools)
    {
        if (!is_valid_tool_name(t.name))
            throw InvalidConversation(fmt::format("invalid tool name '{}'", t.name));
    }
    return backend.complete(conv, tools);
}

void ToolRegistry::add(ToolDefinition definition, Handler handler)
{
    auto name = definition.name;
    _tools.insert_or_assign(std::move(name), std::pair { std::move(definition), std::move(handler) });
}

auto ToolRegistry::definitions() const -> std::vector<ToolDefinition>
{
    auto out = std::vector<ToolDefinition> {};
    for (const auto& [_, entry]: _tools)
        out.push_back(entry.first);
    return out;
}

auto ToolRegistry::execute(const ToolCall& call) -> std::string
{
    auto const it = _tools.find(call.name);
    if (it == _tools.end())
        throw UnknownTool(call.name);
    auto const args = nlohmann::json::parse(call.arguments, nullptr, false);
    if (args.is_discarded() || !args.is_object())
        return nlohmann::json { { "error", "arguments must be a JSON object" } }.dump();
    for (const auto& p: it->second.first.parameters)
    {
        if (p.required && !args.contains(p.name))
            return nlohmann::json { { "error", fmt::format("missing required argument '{}'", p.name) } }.dump();
    }
    return it->second.second(args);
}

MaxTurnsExceeded::MaxTurnsExceeded(int turns, Conversation transcript):
    Error("max_turns_exceeded", fmt::format("model did not produce a final answer within {} turns", turns)),
    _transcript(std::move(transcript))
{
}

auto run_tool_loop(Conversation conv, const std::vector<ToolDefinition>& tools, ToolExecutor& executor, Backend& backend,
                   int max_turns) -> ToolLoopResult
{
    if (max_turns < 1)
        throw InvalidConversation("max_turns must be at least 1");
    auto usage = std::optional<Usage> {};
    for (int turn = 1; turn <= max_turns; ++turn)
    {
        auto const response = complete(conv, tools, backend);
        if (response.usage)
        {
            auto total = usage.value_or(Usage {});
            total.prompt_tokens += response.usage->prompt_tokens;
            total.completion_tokens += response.usage->completion_tokens;
            usage = total;
        }
        conv.messages.push_back(response.to_message());
        if (response.is_text())
            return ToolLoopResult { response.text(), std::move(conv), turn, usage };

        for (const auto& call: response.tool_calls())
        {
            auto content = std::string {};
            try
            {
                content = executor.execute(call);
            }
            catch (const UnknownTool& e)
            {
                content = nlohmann::json { { "error", e.what() } }.dump();
            }
            catch (const std::exception& e)
            {
                content = nlohmann::json { { "error", fmt::format("tool {} failed: {}", call.name, e.what()) } }.dump();
            }
            conv.messages.push_back(ChatMessage::tool(call.id, std::move(content)));
        }
    }
    throw MaxTurnsExceeded(max_turns, std::move(conv));
}

} // namespace fairds::llm
