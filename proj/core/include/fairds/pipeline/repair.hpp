// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/llm/backend.hpp>
#include <fairds/pipeline/validators.hpp>

namespace fairds::pipeline
{

/// Content of the first fenced code block (```turtle or bare ```), else the
/// whole text; trimmed either way. Never fails.
auto extract_code_block(std::string_view llm_text) -> std::string;

struct RepairEntry
{
    int attempt = 0;
    /// Error findings of the attempt, verbatim.
    std::vector<std::string> findings;
    std::string correction_prompt;

    auto operator==(const RepairEntry&) const -> bool = default;
};

struct RepairOutcome
{
    rdf::Graph artifact;
    /// Final model answer, unmodified.
    std::string text;
    int attempts = 0;
    std::vector<RepairEntry> repair_log;
    /// Non-blocking findings on the accepted artifact.
    std::vector<Finding> warnings;
    llm::Conversation transcript;
    std::optional<llm::Usage> usage;
};

/// Tools offered during generation; each attempt then runs a tool loop.
struct ToolBinding
{
    std::vector<llm::ToolDefinition> definitions;
    llm::ToolExecutor* executor = nullptr;
    int max_turns = 4;
};

struct RepairOptions
{
    int max_retries = 2;
    /// Correction prompt template with a `{{findings}}` placeholder that
    /// receives one "- finding" line per error.
    std::string repair_template = "Please correct the following issues:\n{{findings}}";
    std::optional<ToolBinding> tools;
};

/// Phrases a Turtle parse error for the model, with line and column.
auto describe_parse_error(const std::exception& e) -> std::string;

auto format_correction(const std::vector<std::string>& findings, const std::string& repair_template) -> std::string;

/// Generate, extract, parse, validate; on error findings append the answer
/// and a correction turn, then retry. At most max_retries + 1 attempts.
/// Throws RepairExhausted.
auto generate_validated(llm::Conversation conv, const std::vector<Validator>& validators, llm::Backend& backend,
                        const RepairOptions& options = {}) -> RepairOutcome;

class RepairExhausted: public Error
{
  public:
    RepairExhausted(int attempts, std::vector<std::string> findings, std::vector<RepairEntry> log,
                    llm::Conversation transcript);

    [[nodiscard]] auto attempts() const noexcept -> int { return _attempts; }
    [[nodiscard]] auto findings() const noexcept -> const std::vector<std::string>& { return _findings; }
    [[nodiscard]] auto repair_log() const noexcept -> const std::vector<RepairEntry>& { return _log; }
    [[nodiscard]] auto transcript() const noexcept -> const llm::Conversation& { return _transcript; }

  private:
    int _attempts;
    std::vector<std::string> _findings;
    std::vector<RepairEntry> _log;
    llm::Conversation _transcript;
};

} // namespace fairds::pipeline
