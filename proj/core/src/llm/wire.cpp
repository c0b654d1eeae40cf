// SPDX-License-Identifier: Apache-2.0
#include <fairds/llm/wire.hpp>

#include <fmt/format.h>

namespace fairds::llm
{

using nlohmann::json;

namespace
{

    auto string_field(const json& j, const char* key, std::string_view where) -> std::string
    {
        auto const it = j.find(key);
        if (it == j.end() || !it->is_string())
            throw MalformedResponse(fmt::format("{}: missing string field '{}'", where, key));
        return it->get<std::string>();
    }

    auto parameter_type(std::string_view name) -> ParameterType
    {
        for (auto const t: { ParameterType::String, ParameterType::Number, ParameterType::Boolean })
        {
            if (to_string(t) == name)
                return t;
        }
        throw MalformedResponse(fmt::format("unsupported tool parameter type '{}'", name));
    }

    auto tool_call_from_json(const json& j) -> ToolCall
    {
        if (!j.is_object())
            throw MalformedResponse("tool call is not an object");
        auto const fn = j.find("function");
        if (fn == j.end() || !fn->is_object())
            throw MalformedResponse("tool call has no function object");
        auto call = ToolCall { string_field(j, "id", "tool call"), string_field(*fn, "name", "tool call function"), {} };
        auto const args = fn->find("arguments");
        if (args == fn->end() || args->is_null())
            call.arguments = "{}";
        else if (args->is_string())
            call.arguments = args->get<std::string>();
        else
            call.arguments = args->dump();
        return call;
    }

} // namespace

auto to_json(const ChatMessage& message) -> json
{
    auto j = json { { "role", to_string(message.role) } };
    if (message.role == Role::Assistant && !message.tool_calls.empty() && message.content.empty())
        j["content"] = nullptr;
    else
        j["content"] = message.content;
    if (!message.tool_calls.empty())
    {
        auto calls = json::array();
        for (const auto& c: message.tool_calls)
            calls.push_back({ { "id", c.id }, { "type", "function" }, { "function", { { "name", c.name }, { "arguments", c.arguments } } } });
        j["tool_calls"] = std::move(calls);
    }
    if (message.tool_call_id)
        j["tool_call_id"] = *message.tool_call_id;
    return j;
}

auto message_from_json(const json& j) -> ChatMessage
{
    if (!j.is_object())
        throw MalformedResponse("message is not an object");
    auto m = ChatMessage {};
    m.role = role_from_string(string_field(j, "role", "message"));
    if (auto const it = j.find("content"); it != j.end() && !it->is_null())
    {
        if (!it->is_string())
            throw MalformedResponse("message content is not a string");
        m.content = it->get<std::string>();
    }
    if (auto const it = j.find("tool_calls"); it != j.end() && !it->is_null())
    {
        if (!it->is_array())
            throw MalformedResponse("tool_calls is not an array");
        for (const auto& c: *it)
            m.tool_calls.push_back(tool_call_from_json(c));
    }
    if (auto const it = j.find("tool_call_id"); it != j.end() && it->is_string())
        m.tool_call_id = it->get<std::string>();
    return m;
}

auto to_json(const ToolDefinition& tool) -> json
{
    auto properties = json::object();
    auto required = json::array();
    for (const auto& p: tool.parameters)
    {
        properties[p.name] = { { "type", to_string(p.type) }, { "description", p.description } };
        if (p.required)
            required.push_back(p.name);
    }
    return { { "type", "function" },
             { "function",
               { { "name", tool.name },
                 { "description", tool.description },
                 { "parameters", { { "type", "object" }, { "properties", properties }, { "required", required } } } } } };
}

auto tool_from_json(const json& j) -> ToolDefinition
{
    auto const& fn = j.contains("function") ? j.at("function") : j;
    auto tool = ToolDefinition { string_field(fn, "name", "tool"), fn.value("description", std::string {}), {} };
    auto const params = fn.value("parameters", json::object());
    auto const required = params.value("required", json::array());
    // Keep the declared order: nlohmann::json sorts object keys, so required
    // parameters come first in their listed order, then the rest by name.
    auto const properties = params.value("properties", json::object());
    auto seen = std::vector<std::string> {};
    auto add = [&](const std::string& name, bool is_required) {
        auto const& spec = properties.at(name);
        tool.parameters.push_back(ToolParameter { name, parameter_type(spec.value("type", std::string("string"))),
                                                  spec.value("description", std::string {}), is_required });
        seen.push_back(name);
    };
    for (const auto& r: required)
    {
        if (!r.is_string() || !properties.contains(r.get<std::string>()))
            throw MalformedResponse("required tool parameter is not declared");
        add(r.get<std::string>(), true);
    }
    for (const auto& [name, _]: properties.items())
    {
        if (std::find(seen.begin(), seen.end(), name) == seen.end())
            add(name, false);
    }
    return tool;
}

auto to_json(const Conversation& conv) -> json
{
    auto messages = json::array();
    for (const auto& m: conv.messages)
        messages.push_back(to_json(m));
    return { { "model", conv.model_id }, { "messages", messages } };
}

auto conversation_from_json(const json& j) -> Conversation
{
    auto conv = Conversation {};
    conv.model_id = j.value("model", std::string {});
    for (const auto& m: j.at("messages"))
        conv.messages.push_back(message_from_json(m));
    return conv;
}

auto make_request(const Conversation& conv, const std::vector<ToolDefinition>& tools, const SamplingOptions& sampling)
    -> json
{
    auto body = to_json(conv);
    body["temperature"] = sampling.temperature;
    if (sampling.max_tokens)
        body["max_tokens"] = *sampling.max_tokens;
    if (!tools.empty())
    {
        auto list = json::array();
        for (const auto& t: tools)
            list.push_back(to_json(t));
        body["tools"] = std::move(list);
    }
    return body;
}

auto parse_response(const json& body) -> BackendResponse
{
    if (!body.is_object())
        throw MalformedResponse("response body is not a JSON object");
    auto const choices = body.find("choices");
    if (choices == body.end() || !choices->is_array() || choices->empty())
        throw MalformedResponse("response has no choices");
    auto const& choice = choices->front();
    if (!choice.is_object() || !choice.contains("message"))
        throw MalformedResponse("first choice has no message");
    auto const message = message_from_json(choice.at("message"));
    if (message.role != Role::Assistant)
        throw MalformedResponse("first choice is not an assistant message");
    if (message.tool_calls.empty() && !choice.at("message").contains("content"))
        throw MalformedResponse("assistant message has neither content nor tool calls");
    auto response = BackendResponse {};
    if (!message.tool_calls.empty())
        response.content = message.tool_calls;
    else
        response.content = message.content;
    if (auto const usage = body.find("usage"); usage != body.end() && usage->is_object())
        response.usage = Usage { usage->value("prompt_tokens", std::int64_t { 0 }), usage->value("completion_tokens", std::int64_t { 0 }) };
    return response;
}

} // namespace fairds::llm
