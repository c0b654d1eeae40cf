// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/llm/backend.hpp>
#include <fairds/pid/resolver.hpp>
#include <fairds/pipeline/prompts.hpp>
#include <fairds/pipeline/session.hpp>

#include <functional>
#include <memory>

namespace fairds::pipeline
{

struct PipelineConfig
{
    int max_retries = 2;
    int max_tool_turns = 4;
    /// Source of commit timestamps and of "now" for policy checks.
    std::function<rdf::Instant()> clock;
};

/// Current UTC time.
auto system_clock_now() -> rdf::Instant;

/// Result of one committed task.
struct TaskReport
{
    std::string task;
    /// Turtle of the stored artifact, or the explanation text.
    std::string artifact;
    int attempts = 0;
    std::vector<RepairEntry> repair_log;
    std::vector<Finding> warnings;
    /// Schema tasks only: constraint-level change versus the previous shapes.
    std::optional<nlohmann::json> shape_delta;
    std::optional<llm::Usage> usage;
};

auto to_json(const TaskReport& report) -> nlohmann::json;

/// Runs the curator tasks against one backend. A task either commits its
/// artifact to the session or leaves the session untouched.
class Pipeline
{
  public:
    Pipeline(llm::Backend& backend, PromptTemplates prompts, pid::SparqlEndpointConfig sparql,
             std::shared_ptr<pid::SparqlTransport> transport, PipelineConfig config = {});

    /// Extends the current shapes. Requirements, when given, are checked as
    /// validators and kept for later corrections.
    auto extend_schema(Session& session, const std::string& instruction,
                       std::optional<SchemaRequirements> requirements = std::nullopt) -> TaskReport;
    /// Continues the schema conversation with a curator correction.
    auto correct_schema(Session& session, const std::string& correction) -> TaskReport;
    auto create_instance(Session& session, const std::string& description) -> TaskReport;
    auto create_policy(Session& session, const std::string& constraint_description) -> TaskReport;
    /// Fresh conversation; the answer is kept verbatim and followed by a
    /// footer listing the instance's identifiers with their source endpoint.
    auto explain(Session& session) -> TaskReport;

    [[nodiscard]] auto config() const noexcept -> const PipelineConfig& { return _config; }
    [[nodiscard]] auto backend() noexcept -> llm::Backend& { return _backend; }

  private:
    auto schema_task(Session& session, llm::Conversation conv, const std::string& task, const std::string& instruction,
                     std::optional<SchemaRequirements> requirements) -> TaskReport;
    auto resolver_for(Session& session) -> pid::PidResolver&;
    auto options() const -> RepairOptions;
    auto now() const -> rdf::Instant;

    llm::Backend& _backend;
    PromptTemplates _prompts;
    pid::SparqlEndpointConfig _sparql;
    std::shared_ptr<pid::SparqlTransport> _transport;
    PipelineConfig _config;
};

/// Deterministic provenance footer for an explanation.
auto provenance_footer(const rdf::Graph& instance, const std::map<std::string, std::string>& verified_pids)
    -> std::string;

} // namespace fairds::pipeline
