// SPDX-License-Identifier: Apache-2.0
#include <fairds/pipeline/prompts.hpp>

#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace fairds::pipeline
{

auto PromptTemplates::load(const std::filesystem::path& dir) -> PromptTemplates
{
    if (!std::filesystem::is_directory(dir))
        throw PromptError(fmt::format("prompt directory {} does not exist", dir.string()));
    auto out = PromptTemplates {};
    for (const auto& entry: std::filesystem::directory_iterator(dir))
    {
        auto const ext = entry.path().extension();
        if (!entry.is_regular_file() || (ext != ".txt" && ext != ".md"))
            continue;
        auto in = std::ifstream(entry.path(), std::ios::binary);
        auto buffer = std::ostringstream {};
        buffer << in.rdbuf();
        auto text = buffer.str();
        while (!text.empty() && text.back() == '\n')
            text.pop_back();
        out.set(entry.path().stem().string(), std::move(text));
    }
    return out;
}

void PromptTemplates::set(std::string name, std::string text)
{
    _templates.insert_or_assign(std::move(name), std::move(text));
}

auto PromptTemplates::raw(const std::string& name) const -> const std::string&
{
    auto const it = _templates.find(name);
    if (it == _templates.end())
        throw PromptError(fmt::format("prompt template '{}' is missing", name));
    return it->second;
}

auto PromptTemplates::render(const std::string& name, const std::map<std::string, std::string>& values) const
    -> std::string
{
    try
    {
        return render_template(raw(name), values);
    }
    catch (const PromptError& e)
    {
        throw PromptError(fmt::format("template '{}': {}", name, e.what()));
    }
}

auto render_template(std::string_view text, const std::map<std::string, std::string>& values) -> std::string
{
    auto out = std::string {};
    auto used = std::set<std::string> {};
    auto pos = std::size_t { 0 };
    while (true)
    {
        auto const open = text.find("{{", pos);
        if (open == std::string_view::npos)
        {
            out += text.substr(pos);
            break;
        }
        auto const close = text.find("}}", open + 2);
        if (close == std::string_view::npos)
            throw PromptError("unterminated placeholder");
        out += text.substr(pos, open - pos);
        auto const key = std::string(text.substr(open + 2, close - open - 2));
        auto const it = values.find(key);
        if (it == values.end())
            throw PromptError(fmt::format("no value for placeholder '{}'", key));
        out += it->second;
        used.insert(key);
        pos = close + 2;
    }
    for (const auto& [key, _]: values)
    {
        if (!used.contains(key))
            throw PromptError(fmt::format("value '{}' has no placeholder", key));
    }
    return out;
}

auto default_prompts_dir() -> std::filesystem::path
{
    if (auto const* env = std::getenv("FAIRDS_PROMPTS"); env != nullptr && *env != '\0')
        return env;
#ifdef FAIRDS_INSTALLED_PROMPTS_DIR
    if (std::filesystem::is_directory(FAIRDS_INSTALLED_PROMPTS_DIR))
        return FAIRDS_INSTALLED_PROMPTS_DIR;
#endif
#ifdef FAIRDS_SOURCE_PROMPTS_DIR
    return FAIRDS_SOURCE_PROMPTS_DIR;
#else
    return "prompts";
#endif
}

} // namespace fairds::pipeline
