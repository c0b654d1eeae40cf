// SPDX-License-Identifier: Apache-2.0
#include <fairds/llm/scripted.hpp>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace fairds::llm
{

auto Matcher::matches(std::string_view text) const -> bool
{
    switch (kind)
    {
        case MatchKind::Exact: return text == pattern;
        case MatchKind::Substring: return text.find(pattern) != std::string_view::npos;
        case MatchKind::Regex: return std::regex_search(text.begin(), text.end(), std::regex(pattern));
    }
    return false;
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptStep> script, std::string model_id):
    _steps(std::move(script)), _consumed(_steps.size(), false), _model_id(std::move(model_id))
{
    for (const auto& s: _steps)
    {
        if (s.matcher.kind == MatchKind::Regex)
        {
            try
            {
                _regexes.emplace_back(std::regex(s.matcher.pattern));
            }
            catch (const std::regex_error& e)
            {
                throw InvalidScript(fmt::format("invalid regex '{}': {}", s.matcher.pattern, e.what()));
            }
        }
        else
            _regexes.emplace_back();
    }
}

auto ScriptedBackend::complete(const Conversation& conv, const std::vector<ToolDefinition>&) -> BackendResponse
{
    auto latest = std::string_view {};
    for (auto it = conv.messages.rbegin(); it != conv.messages.rend(); ++it)
    {
        if (it->role == Role::User || it->role == Role::Tool)
        {
            latest = it->content;
            break;
        }
    }

    auto const lock = std::scoped_lock(_mutex);
    if (std::find(_consumed.begin(), _consumed.end(), false) == _consumed.end())
        throw BackendUnavailable("script exhausted");
    for (std::size_t i = 0; i < _steps.size(); ++i)
    {
        if (_consumed[i])
            continue;
        auto const& step = _steps[i];
        auto const hit = step.matcher.kind == MatchKind::Regex
                             ? std::regex_search(latest.begin(), latest.end(), *_regexes[i])
                             : step.matcher.matches(latest);
        if (!hit)
            continue;
        if (!step.repeatable)
            _consumed[i] = true;
        return step.response;
    }
    throw BackendUnavailable("no script step matches the latest message");
}

auto ScriptedBackend::remaining() const -> std::size_t
{
    auto const lock = std::scoped_lock(_mutex);
    return static_cast<std::size_t>(std::count(_consumed.begin(), _consumed.end(), false));
}

namespace
{

    auto read_file(const std::filesystem::path& path) -> std::string
    {
        auto in = std::ifstream(path, std::ios::binary);
        if (!in)
            throw InvalidScript(fmt::format("cannot read {}", path.string()));
        auto buffer = std::ostringstream {};
        buffer << in.rdbuf();
        return buffer.str();
    }

    auto parse_matcher(const nlohmann::json& j, std::size_t index) -> Matcher
    {
        if (!j.is_object() || j.size() != 1)
            throw InvalidScript(fmt::format("step {}: 'match' must have exactly one of exact, substring, regex", index));
        auto const key = j.begin().key();
        auto const& value = j.begin().value();
        if (!value.is_string())
            throw InvalidScript(fmt::format("step {}: match pattern must be a string", index));
        if (key == "exact")
            return { MatchKind::Exact, value.get<std::string>() };
        if (key == "substring")
            return { MatchKind::Substring, value.get<std::string>() };
        if (key == "regex")
            return { MatchKind::Regex, value.get<std::string>() };
        throw InvalidScript(fmt::format("step {}: unknown matcher '{}'", index, key));
    }

    auto parse_response_spec(const nlohmann::json& j, const std::filesystem::path& base_dir, std::size_t index)
        -> BackendResponse
    {
        auto r = BackendResponse {};
        if (j.contains("text"))
            r.content = j.at("text").get<std::string>();
        else if (j.contains("text_file"))
            r.content = read_file(base_dir / j.at("text_file").get<std::string>());
        else if (j.contains("tool_calls"))
        {
            auto calls = std::vector<ToolCall> {};
            for (const auto& c: j.at("tool_calls"))
            {
                auto const& args = c.at("arguments");
                calls.push_back(ToolCall { c.at("id").get<std::string>(), c.at("name").get<std::string>(),
                                           args.is_string() ? args.get<std::string>() : args.dump() });
            }
            if (calls.empty())
                throw InvalidScript(fmt::format("step {}: tool_calls must not be empty", index));
            r.content = std::move(calls);
        }
        else
            throw InvalidScript(fmt::format("step {}: response needs text, text_file or tool_calls", index));
        if (j.contains("usage"))
            r.usage = Usage { j.at("usage").value("prompt_tokens", std::int64_t { 0 }),
                              j.at("usage").value("completion_tokens", std::int64_t { 0 }) };
        return r;
    }

} // namespace

auto parse_script(const nlohmann::json& j, const std::filesystem::path& base_dir) -> std::vector<ScriptStep>
{
    if (!j.is_array())
        throw InvalidScript("script must be a JSON array of steps");
    auto steps = std::vector<ScriptStep> {};
    for (std::size_t i = 0; i < j.size(); ++i)
    {
        auto const& s = j[i];
        try
        {
            steps.push_back(ScriptStep { parse_matcher(s.at("match"), i), parse_response_spec(s.at("response"), base_dir, i),
                                         s.value("repeatable", false) });
        }
        catch (const nlohmann::json::exception& e)
        {
            throw InvalidScript(fmt::format("step {}: {}", i, e.what()));
        }
    }
    return steps;
}

auto load_script(const std::filesystem::path& path) -> std::vector<ScriptStep>
{
    auto const j = nlohmann::json::parse(read_file(path), nullptr, false);
    if (j.is_discarded())
        throw InvalidScript(fmt::format("{} is not valid JSON", path.string()));
    return parse_script(j, path.parent_path());
}

} // namespace fairds::llm
