// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/llm/backend.hpp>

#include <filesystem>
#include <mutex>
#include <regex>

namespace fairds::llm
{

enum class MatchKind
{
    Exact,
    Substring,
    Regex,
};

struct Matcher
{
    MatchKind kind = MatchKind::Substring;
    std::string pattern;

    [[nodiscard]] auto matches(std::string_view text) const -> bool;
};

struct ScriptStep
{
    Matcher matcher;
    BackendResponse response;
    bool repeatable = false;
};

/// Deterministic backend replaying canned responses. Each call consumes the
/// first unconsumed step whose matcher accepts the latest user or tool
/// message; repeatable steps are never consumed.
class ScriptedBackend: public Backend
{
  public:
    explicit ScriptedBackend(std::vector<ScriptStep> script, std::string model_id = "scripted");

    auto complete(const Conversation& conv, const std::vector<ToolDefinition>& tools) -> BackendResponse override;
    [[nodiscard]] auto model_id() const -> std::string override { return _model_id; }
    [[nodiscard]] auto remaining() const -> std::size_t;

  private:
    std::vector<ScriptStep> _steps;
    std::vector<bool> _consumed;
    std::vector<std::optional<std::regex>> _regexes;
    std::string _model_id;
    mutable std::mutex _mutex;
};

/// Reads a script file: a JSON array of
/// `{"match": {"substring"|"exact"|"regex": text},
///   "response": {"text": ...} | {"text_file": path} | {"tool_calls": [...]},
///   "repeatable": bool}`.
/// `text_file` paths are relative to the script file.
auto load_script(const std::filesystem::path& path) -> std::vector<ScriptStep>;

auto parse_script(const nlohmann::json& j, const std::filesystem::path& base_dir) -> std::vector<ScriptStep>;

class InvalidScript: public Error
{
  public:
    explicit InvalidScript(const std::string& detail): Error("invalid_script", detail) {}
};

} // namespace fairds::llm
