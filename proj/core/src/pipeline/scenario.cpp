// SPDX-License-Identifier: Apache-2.0
#include <fairds/llm/scripted.hpp>
#include <fairds/pipeline/scenario.hpp>
#include <fairds/rdf/turtle.hpp>

#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace fairds::pipeline
{

using nlohmann::json;

namespace
{

    auto read_text(const std::filesystem::path& path) -> std::string
    {
        auto in = std::ifstream(path, std::ios::binary);
        if (!in)
            throw InvalidRequest(fmt::format("cannot read {}", path.string()));
        auto buffer = std::ostringstream {};
        buffer << in.rdbuf();
        return buffer.str();
    }

} // namespace

auto load_scenario(const std::filesystem::path& path) -> Scenario
{
    auto const dir = path.parent_path();
    try
    {
        auto const j = json::parse(read_text(path));
        auto s = Scenario {};
        s.base_shapes = dir / j.at("base_shapes").get<std::string>();
        s.script = dir / j.at("script").get<std::string>();
        s.sparql_fixtures = dir / j.at("sparql_fixtures").get<std::string>();
        auto const clock = rdf::parse_datetime(j.at("clock").get<std::string>());
        if (!clock)
            throw InvalidRequest(fmt::format("invalid clock '{}'", j.at("clock").get<std::string>()));
        s.clock = *clock;
        s.model_id = j.value("model_id", s.model_id);
        s.session_id = j.value("session_id", s.session_id);
        s.max_retries = j.value("max_retries", s.max_retries);
        for (const auto& step: j.at("steps"))
        {
            auto st = ScenarioStep { step.at("task").get<std::string>(), step.value("instruction", std::string {}), std::nullopt };
            if (step.contains("requirements"))
                st.requirements = requirements_from_json(step.at("requirements"));
            s.steps.push_back(std::move(st));
        }
        return s;
    }
    catch (const json::exception& e)
    {
        throw InvalidRequest(fmt::format("invalid scenario {}: {}", path.string(), e.what()));
    }
}

auto run_step(Pipeline& pipeline, Session& session, const ScenarioStep& step) -> TaskReport
{
    if (step.task == "extend")
        return pipeline.extend_schema(session, step.instruction, step.requirements);
    if (step.task == "correct")
        return pipeline.correct_schema(session, step.instruction);
    if (step.task == "instance")
        return pipeline.create_instance(session, step.instruction);
    if (step.task == "policy")
        return pipeline.create_policy(session, step.instruction);
    if (step.task == "explain")
        return pipeline.explain(session);
    throw InvalidRequest(fmt::format("unknown task '{}'", step.task));
}

auto run_scenario(const Scenario& scenario, const PromptTemplates& prompts) -> ScenarioResult
{
    auto backend = llm::ScriptedBackend(llm::load_script(scenario.script), scenario.model_id);
    auto transport = std::make_shared<pid::FixtureTransport>(scenario.sparql_fixtures);
    auto config = PipelineConfig {};
    config.max_retries = scenario.max_retries;
    config.clock = [at = scenario.clock] { return at; };
    auto pipeline = Pipeline(backend, prompts, pid::SparqlEndpointConfig {}, transport, config);

    auto result = ScenarioResult { make_session(scenario.session_id, rdf::parse_turtle(read_text(scenario.base_shapes))), {}, {} };
    for (const auto& step: scenario.steps)
        result.reports.push_back(run_step(pipeline, result.session, step));
    result.artifacts = export_artifacts(result.session);
    return result;
}

} // namespace fairds::pipeline
