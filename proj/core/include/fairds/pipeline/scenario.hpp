// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/pipeline/pipeline.hpp>

#include <filesystem>

namespace fairds::pipeline
{

/// One curator task: extend, correct, instance, policy or explain.
struct ScenarioStep
{
    std::string task;
    std::string instruction;
    std::optional<SchemaRequirements> requirements;
};

/// Offline end-to-end run: scripted backend, SPARQL fixtures, fixed clock.
struct Scenario
{
    std::filesystem::path base_shapes;
    std::filesystem::path script;
    std::filesystem::path sparql_fixtures;
    rdf::Instant clock;
    std::string model_id = "scripted";
    std::string session_id = "scenario";
    int max_retries = 2;
    std::vector<ScenarioStep> steps;
};

/// Reads a scenario file; paths inside are relative to it. Throws
/// InvalidRequest.
auto load_scenario(const std::filesystem::path& path) -> Scenario;

/// Dispatches one step to the matching pipeline task.
auto run_step(Pipeline& pipeline, Session& session, const ScenarioStep& step) -> TaskReport;

struct ScenarioResult
{
    Session session;
    std::vector<TaskReport> reports;
    ArtifactSet artifacts;
};

/// Runs every step in order. Task errors propagate.
auto run_scenario(const Scenario& scenario, const PromptTemplates& prompts) -> ScenarioResult;

} // namespace fairds::pipeline
