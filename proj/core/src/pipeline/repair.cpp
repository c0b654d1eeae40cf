// SPDX-License-Identifier: Apache-2.0
#include <fairds/pipeline/prompts.hpp>
#include <fairds/pipeline/repair.hpp>
#include <fairds/rdf/turtle.hpp>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace fairds::pipeline
{

namespace
{

    auto trim(std::string_view s) -> std::string
    {
        auto const ws = std::string_view(" \t\r\n");
        auto const first = s.find_first_not_of(ws);
        if (first == std::string_view::npos)
            return {};
        return std::string(s.substr(first, s.find_last_not_of(ws) - first + 1));
    }

    // Length of the backtick run starting at `pos` when it opens a line.
    auto fence_at(std::string_view text, std::size_t pos) -> std::size_t
    {
        if (pos > 0 && text[pos - 1] != '\n')
        {
            // Allow indentation before the fence.
            auto line_start = text.rfind('\n', pos - 1);
            line_start = line_start == std::string_view::npos ? 0 : line_start + 1;
            if (text.substr(line_start, pos - line_start).find_first_not_of(" \t") != std::string_view::npos)
                return 0;
        }
        auto n = std::size_t { 0 };
        while (pos + n < text.size() && text[pos + n] == '`')
            ++n;
        return n >= 3 ? n : 0;
    }

} // namespace

auto extract_code_block(std::string_view text) -> std::string
{
    for (auto pos = text.find("```"); pos != std::string_view::npos; pos = text.find("```", pos + 1))
    {
        auto const width = fence_at(text, pos);
        if (width == 0)
            continue;
        auto const line_end = text.find('\n', pos);
        if (line_end == std::string_view::npos)
            return {};
        auto const body_start = line_end + 1;
        auto const closing = std::string(width, '`');
        for (auto close = text.find(closing, body_start); close != std::string_view::npos;
             close = text.find(closing, close + 1))
        {
            if (fence_at(text, close) >= width)
                return trim(text.substr(body_start, close - body_start));
        }
        return trim(text.substr(body_start));
    }
    return trim(text);
}

auto describe_parse_error(const std::exception& e) -> std::string
{
    if (auto const* p = dynamic_cast<const rdf::ParseError*>(&e))
        return fmt::format("Turtle syntax error at line {}, column {}: {}", p->line(), p->column(), p->detail());
    return fmt::format("Turtle syntax error: {}", e.what());
}

auto format_correction(const std::vector<std::string>& findings, const std::string& repair_template) -> std::string
{
    auto lines = std::string {};
    for (std::size_t i = 0; i < findings.size(); ++i)
    {
        if (i > 0)
            lines += '\n';
        lines += "- " + findings[i];
    }
    return render_template(repair_template, { { "findings", lines } });
}

RepairExhausted::RepairExhausted(int attempts, std::vector<std::string> findings, std::vector<RepairEntry> log,
                                 llm::Conversation transcript):
    Error("repair_exhausted",
          fmt::format("no valid artifact after {} attempt(s); last issues: {}", attempts, fmt::join(findings, "; "))),
    _attempts(attempts), _findings(std::move(findings)), _log(std::move(log)), _transcript(std::move(transcript))
{
}

auto generate_validated(llm::Conversation conv, const std::vector<Validator>& validators, llm::Backend& backend,
                        const RepairOptions& options) -> RepairOutcome
{
    if (options.max_retries < 0)
        throw llm::InvalidConversation("max_retries must not be negative");
    auto log = std::vector<RepairEntry> {};
    auto usage = std::optional<llm::Usage> {};
    auto add_usage = [&](const std::optional<llm::Usage>& u) {
        if (!u)
            return;
        auto total = usage.value_or(llm::Usage {});
        total.prompt_tokens += u->prompt_tokens;
        total.completion_tokens += u->completion_tokens;
        usage = total;
    };

    for (int attempt = 1;; ++attempt)
    {
        auto text = std::string {};
        if (options.tools)
        {
            auto const& t = *options.tools;
            auto result = llm::run_tool_loop(std::move(conv), t.definitions, *t.executor, backend, t.max_turns);
            conv = std::move(result.transcript);
            text = std::move(result.final_text);
            add_usage(result.usage);
        }
        else
        {
            auto const response = llm::complete(conv, {}, backend);
            if (!response.is_text())
                throw llm::MalformedResponse("model requested a tool call but no tools were offered");
            add_usage(response.usage);
            conv.messages.push_back(response.to_message());
            text = response.text();
        }

        auto findings = std::vector<Finding> {};
        auto graph = rdf::Graph {};
        try
        {
            graph = rdf::parse_turtle(extract_code_block(text));
        }
        catch (const rdf::ParseError& e)
        {
            findings.push_back(error_finding(describe_parse_error(e)));
        }
        if (findings.empty())
            findings = run_validators(validators, graph);

        auto errors = std::vector<std::string> {};
        auto warnings = std::vector<Finding> {};
        for (auto& f: findings)
        {
            if (f.severity == Severity::Error)
                errors.push_back(std::move(f.message));
            else
                warnings.push_back(std::move(f));
        }
        if (errors.empty())
            return RepairOutcome { std::move(graph), std::move(text), attempt, std::move(log), std::move(warnings),
                                   std::move(conv), usage };
        if (attempt > options.max_retries)
            throw RepairExhausted(attempt, std::move(errors), std::move(log), std::move(conv));

        auto prompt = format_correction(errors, options.repair_template);
        conv.messages.push_back(llm::ChatMessage::user(prompt));
        log.push_back(RepairEntry { attempt, std::move(errors), std::move(prompt) });
    }
}

} // namespace fairds::pipeline
