// SPDX-License-Identifier: Apache-2.0
#include <fairds/pipeline/pipeline.hpp>
#include <fairds/rdf/turtle.hpp>
#include <fairds/rdf/vocab.hpp>
#include <fairds/shacl/delta.hpp>

#include <fmt/format.h>

#include <chrono>
#include <set>

namespace fairds::pipeline
{

using nlohmann::json;

auto system_clock_now() -> rdf::Instant
{
    auto const since_epoch = std::chrono::system_clock::now().time_since_epoch();
    auto const seconds = std::chrono::duration_cast<std::chrono::seconds>(since_epoch);
    return { seconds.count(),
             static_cast<std::int32_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(since_epoch - seconds).count()) };
}

auto to_json(const TaskReport& r) -> json
{
    auto log = json::array();
    for (const auto& e: r.repair_log)
        log.push_back(to_json(e));
    auto out = json { { "task", r.task },         { "artifact", r.artifact }, { "attempts", r.attempts },
                      { "repair_log", log },      { "warnings", to_json(r.warnings) },
                      { "shape_delta", r.shape_delta ? *r.shape_delta : json(nullptr) } };
    if (r.usage)
        out["usage"] = { { "prompt_tokens", r.usage->prompt_tokens }, { "completion_tokens", r.usage->completion_tokens } };
    return out;
}

Pipeline::Pipeline(llm::Backend& backend, PromptTemplates prompts, pid::SparqlEndpointConfig sparql,
                   std::shared_ptr<pid::SparqlTransport> transport, PipelineConfig config):
    _backend(backend),
    _prompts(std::move(prompts)),
    _sparql(std::move(sparql)),
    _transport(std::move(transport)),
    _config(std::move(config))
{
    if (_config.max_retries < 0)
        throw InvalidRequest("max_retries must not be negative");
    if (_config.max_tool_turns < 1)
        throw InvalidRequest("max_tool_turns must be at least 1");
    if (!_config.clock)
        _config.clock = system_clock_now;
    if (!_transport)
        _transport = std::make_shared<pid::HttpTransport>();
}

auto Pipeline::options() const -> RepairOptions
{
    auto opts = RepairOptions {};
    opts.max_retries = _config.max_retries;
    if (_prompts.has("repair"))
        opts.repair_template = _prompts.raw("repair");
    return opts;
}

auto Pipeline::now() const -> rdf::Instant
{
    return _config.clock();
}

auto Pipeline::resolver_for(Session& session) -> pid::PidResolver&
{
    if (!session.resolver)
    {
        session.resolver = std::make_shared<pid::PidResolver>(_sparql, _transport);
        for (const auto& [pid, endpoint]: session.verified_pids)
            session.resolver->remember(pid, endpoint);
    }
    return *session.resolver;
}

namespace
{

    void require_instruction(const std::string& text, const char* what)
    {
        if (text.find_first_not_of(" \t\r\n") == std::string::npos)
            throw InvalidRequest(fmt::format("{} must not be empty", what));
    }

    auto fresh_conversation(llm::Backend& backend, std::string system, std::string user) -> llm::Conversation
    {
        auto conv = llm::Conversation {};
        conv.model_id = backend.model_id();
        conv.messages.push_back(llm::ChatMessage::system(std::move(system)));
        conv.messages.push_back(llm::ChatMessage::user(std::move(user)));
        return conv;
    }

    auto record(std::string task, std::string instruction, const RepairOutcome& outcome, rdf::Instant at) -> TaskRecord
    {
        return { std::move(task), std::move(instruction), outcome.attempts, outcome.repair_log, outcome.warnings, at };
    }

} // namespace

auto Pipeline::schema_task(Session& session, llm::Conversation conv, const std::string& task,
                           const std::string& instruction, std::optional<SchemaRequirements> requirements) -> TaskReport
{
    auto validators = std::vector<Validator> { shape_wellformed_validator(), monotonicity_validator(session.base_shapes) };
    if (requirements && !requirements->empty())
        validators.push_back(requirements_validator(*requirements, session.base_shapes));

    auto outcome = generate_validated(std::move(conv), validators, _backend, options());
    auto shapes = shacl::parse_shapes(outcome.artifact);
    auto delta = shacl::to_json(shacl::shape_delta(session.shapes, shapes), session.shapes, shapes);
    auto const at = now();

    session.shapes = std::move(shapes);
    session.last_delta = delta;
    session.requirements = std::move(requirements);
    session.transcripts["schema"] = outcome.transcript;
    session.provenance["shapes"] = { _backend.model_id(), outcome.attempts, at };
    session.history.push_back(record(task, instruction, outcome, at));

    return { task,
             rdf::serialize_turtle(session.shapes.source),
             outcome.attempts,
             outcome.repair_log,
             outcome.warnings,
             std::move(delta),
             outcome.usage };
}

auto Pipeline::extend_schema(Session& session, const std::string& instruction,
                             std::optional<SchemaRequirements> requirements) -> TaskReport
{
    require_instruction(instruction, "instruction");
    if (session.instance)
        throw TaskOrderViolation("the schema cannot change once an instance exists");
    auto conv = fresh_conversation(_backend, _prompts.render("schema_system", {}),
                                   _prompts.render("schema_extend", { { "instruction", instruction },
                                                                      { "shapes", rdf::serialize_turtle(session.shapes.source) } }));
    return schema_task(session, std::move(conv), "extend", instruction, std::move(requirements));
}

auto Pipeline::correct_schema(Session& session, const std::string& correction) -> TaskReport
{
    require_instruction(correction, "correction");
    auto const it = session.transcripts.find("schema");
    if (it == session.transcripts.end())
        throw TaskOrderViolation("no schema task to correct; extend the schema first");
    if (session.instance)
        throw TaskOrderViolation("the schema cannot change once an instance exists");
    auto conv = it->second;
    conv.model_id = _backend.model_id();
    conv.messages.push_back(llm::ChatMessage::user(correction));
    return schema_task(session, std::move(conv), "correct", correction, session.requirements);
}

auto Pipeline::create_instance(Session& session, const std::string& description) -> TaskReport
{
    require_instruction(description, "description");
    if (!session.has_schema())
        throw TaskOrderViolation("create an instance only after the schema has been extended");
    if (session.policy)
        throw TaskOrderViolation("the instance cannot change once a policy exists");

    auto& resolver = resolver_for(session);
    auto registry = llm::ToolRegistry {};
    registry.add(pid::tool_definition(), pid::tool_handler(resolver));

    auto opts = options();
    opts.tools = ToolBinding { registry.definitions(), &registry, _config.max_tool_turns };
    auto const validators = std::vector<Validator> {
        conformance_validator(session.shapes),
        verified_pid_validator([&resolver] { return resolver.returned_pids(); }),
    };
    auto conv = fresh_conversation(_backend, _prompts.render("instance_system", {}),
                                   _prompts.render("instance_create", { { "instruction", description },
                                                                        { "shapes", rdf::serialize_turtle(session.shapes.source) } }));
    auto outcome = generate_validated(std::move(conv), validators, _backend, opts);
    auto const at = now();

    session.instance = outcome.artifact;
    for (const auto& [pid, endpoint]: resolver.returned_pids())
        session.verified_pids[pid] = endpoint;
    session.transcripts["instance"] = outcome.transcript;
    session.provenance["instance"] = { _backend.model_id(), outcome.attempts, at };
    session.history.push_back(record("instance", description, outcome, at));

    return { "instance", rdf::serialize_turtle(*session.instance), outcome.attempts, outcome.repair_log,
             outcome.warnings, std::nullopt, outcome.usage };
}

auto Pipeline::create_policy(Session& session, const std::string& constraint_description) -> TaskReport
{
    require_instruction(constraint_description, "instruction");
    if (!session.instance)
        throw TaskOrderViolation("create a policy only after the instance has been created");

    auto policy_iris = std::set<std::string> {};
    auto const has_policy = rdf::Term::iri(std::string(vocab::odrl::hasPolicy));
    for (const auto& t: *session.instance)
    {
        if (t.predicate == has_policy)
        {
            if (!t.object.is_iri())
                throw PreconditionFailed("the instance's odrl:hasPolicy object must be an IRI");
            policy_iris.insert(t.object.value());
        }
    }
    if (policy_iris.size() != 1)
        throw PreconditionFailed(
            fmt::format("the instance must reference exactly one policy IRI via odrl:hasPolicy, found {}", policy_iris.size()));
    auto const& policy_iri = *policy_iris.begin();

    auto conv = fresh_conversation(
        _backend, _prompts.render("policy_system", { { "odrl_primer", _prompts.raw("odrl_primer") } }),
        _prompts.render("policy_create", { { "instance", rdf::serialize_turtle(*session.instance) },
                                           { "instruction", constraint_description },
                                           { "policy_iri", policy_iri } }));
    auto outcome = generate_validated(std::move(conv), { policy_validator(policy_iri, now()) }, _backend, options());
    auto const at = now();

    session.policy = odrl::parse_policy(outcome.artifact);
    session.policy_graph = outcome.artifact;
    session.transcripts["policy"] = outcome.transcript;
    session.provenance["policy"] = { _backend.model_id(), outcome.attempts, at };
    session.history.push_back(record("policy", constraint_description, outcome, at));

    return { "policy", rdf::serialize_turtle(*session.policy_graph), outcome.attempts, outcome.repair_log,
             outcome.warnings, std::nullopt, outcome.usage };
}

auto provenance_footer(const rdf::Graph& instance, const std::map<std::string, std::string>& verified_pids) -> std::string
{
    auto const gnd_id = rdf::Term::iri(std::string(vocab::gndo::gndIdentifier));
    auto pids = std::set<std::string> {};
    for (const auto& t: instance)
    {
        if (t.predicate == gnd_id && t.object.is_literal())
            pids.insert(t.object.value());
    }
    auto out = std::string("\n\n---\nPersistent identifiers:\n");
    if (pids.empty())
        return out + "no persistent identifiers present\n";
    for (const auto& pid: pids)
    {
        auto const it = verified_pids.find(pid);
        out += fmt::format("- GND identifier {} (source: {})\n", pid,
                           it == verified_pids.end() ? std::string("unverified") : it->second);
    }
    return out;
}

auto Pipeline::explain(Session& session) -> TaskReport
{
    if (!session.policy || !session.instance)
        throw TaskOrderViolation("explain requires shapes, an instance and a policy");

    auto conv = fresh_conversation(
        _backend, _prompts.render("explain_system", {}),
        _prompts.render("explain", { { "shapes", rdf::serialize_turtle(session.shapes.source) },
                                     { "instance", rdf::serialize_turtle(*session.instance) },
                                     { "policy", rdf::serialize_turtle(*session.policy_graph) } }));
    auto const response = llm::complete(conv, {}, _backend);
    if (!response.is_text())
        throw llm::MalformedResponse("model requested a tool call but no tools were offered");
    conv.messages.push_back(response.to_message());
    auto text = response.text() + provenance_footer(*session.instance, session.verified_pids);
    auto const at = now();

    session.explanation = text;
    session.transcripts["explain"] = conv;
    session.provenance["explanation"] = { _backend.model_id(), 1, at };
    session.history.push_back({ "explain", "", 1, {}, {}, at });

    return { "explain", std::move(text), 1, {}, {}, std::nullopt, response.usage };
}

} // namespace fairds::pipeline
