// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/error.hpp>

#include <filesystem>
#include <map>
#include <string>

namespace fairds::pipeline
{

/// Prompt templates loaded from text assets. Placeholders are written
/// `{{name}}`.
class PromptTemplates
{
  public:
    /// Reads every `*.txt` and `*.md` file of `dir`, keyed by stem.
    static auto load(const std::filesystem::path& dir) -> PromptTemplates;

    void set(std::string name, std::string text);
    [[nodiscard]] auto has(const std::string& name) const -> bool { return _templates.contains(name); }
    [[nodiscard]] auto raw(const std::string& name) const -> const std::string&;

    /// Substitutes every placeholder. Throws PromptError for unknown
    /// templates, placeholders without a value and unused values.
    [[nodiscard]] auto render(const std::string& name, const std::map<std::string, std::string>& values) const
        -> std::string;

  private:
    std::map<std::string, std::string> _templates;
};

/// Substitutes `{{name}}` placeholders in `text`.
auto render_template(std::string_view text, const std::map<std::string, std::string>& values) -> std::string;

/// Default search order for the prompt assets: `$FAIRDS_PROMPTS`, the
/// installed data directory, then the source tree.
auto default_prompts_dir() -> std::filesystem::path;

class PromptError: public Error
{
  public:
    explicit PromptError(const std::string& detail): Error("prompt_error", detail) {}
};

} // namespace fairds::pipeline
