// SPDX-License-Identifier: Apache-2.0
#include <fairds/llm/live.hpp>
#include <fairds/llm/scripted.hpp>
#include <fairds/odrl/policy.hpp>
#include <fairds/rdf/isomorphism.hpp>
#include <fairds/rdf/turtle.hpp>
#include <fairds/service/service.hpp>
#include <fairds/service/zip.hpp>
#include <fairds/shacl/validate.hpp>

#include <httplib.h>

#include <fmt/format.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace fairds::service
{

using nlohmann::json;

namespace
{

    class SessionExists: public Error
    {
      public:
        explicit SessionExists(const std::string& id): Error("session_exists", "session '" + id + "' already exists") {}
    };

    class RouteNotFound: public Error
    {
      public:
        explicit RouteNotFound(const std::string& what): Error("not_found", what) {}
    };

    class MethodNotAllowed: public Error
    {
      public:
        explicit MethodNotAllowed(const std::string& what): Error("method_not_allowed", what) {}
    };

    auto json_response(int status, const json& body) -> HttpResponse
    {
        return { status, "application/json", body.dump(), {} };
    }

    auto error_response(const std::exception& e) -> HttpResponse
    {
        auto error = api_error_from(e);
        if (error.code == "session_exists")
            error.status = 409;
        auto response = json_response(error.status, to_json(error));
        if (error.retry_after)
            response.headers.emplace("Retry-After", std::to_string(*error.retry_after));
        return response;
    }

    auto parse_body(const std::string& body) -> json
    {
        if (body.find_first_not_of(" \t\r\n") == std::string::npos)
            return json::object();
        try
        {
            auto j = json::parse(body);
            if (!j.is_object())
                throw pipeline::InvalidRequest("request body must be a JSON object");
            return j;
        }
        catch (const json::exception& e)
        {
            throw pipeline::InvalidRequest(fmt::format("request body is not JSON: {}", e.what()));
        }
    }

    auto string_field(const json& body, const char* key, bool required) -> std::string
    {
        auto const it = body.find(key);
        if (it == body.end() || it->is_null())
        {
            if (required)
                throw pipeline::InvalidRequest(fmt::format("field '{}' is required", key));
            return {};
        }
        if (!it->is_string())
            throw pipeline::InvalidRequest(fmt::format("field '{}' must be a string", key));
        return it->get<std::string>();
    }

    auto split_path(const std::string& path) -> std::vector<std::string>
    {
        auto parts = std::vector<std::string> {};
        auto const query = path.find('?');
        auto const bare = path.substr(0, query);
        auto start = std::size_t { 0 };
        while (start <= bare.size())
        {
            auto const slash = bare.find('/', start);
            auto const end = slash == std::string::npos ? bare.size() : slash;
            if (end > start)
                parts.push_back(bare.substr(start, end - start));
            if (slash == std::string::npos)
                break;
            start = slash + 1;
        }
        return parts;
    }

    auto random_session_id() -> std::string
    {
        auto device = std::random_device {};
        auto rng = std::mt19937_64((static_cast<std::uint64_t>(device()) << 32U) ^ device());
        return fmt::format("{:016x}", rng());
    }

    auto read_text(const std::filesystem::path& path) -> std::string
    {
        auto in = std::ifstream(path, std::ios::binary);
        if (!in)
            throw pipeline::InvalidRequest(fmt::format("cannot read {}", path.string()));
        auto buffer = std::ostringstream {};
        buffer << in.rdbuf();
        return buffer.str();
    }

    auto state_json(const pipeline::Session& s) -> json
    {
        return { { "schema", s.has_schema() },
                 { "instance", s.instance.has_value() },
                 { "policy", s.policy.has_value() },
                 { "explanation", s.explanation.has_value() } };
    }

    auto report_json(const shacl::ShapeSet& shapes, const rdf::Graph& data) -> json
    {
        auto const report = shacl::validate(data, shapes);
        auto const& prefixes = data.prefixes();
        auto violations = json::array();
        for (const auto& v: report.violations)
        {
            violations.push_back({ { "focus_node", rdf::to_display(v.focus_node, prefixes) },
                                   { "path", rdf::to_display(rdf::Term::iri(v.path), prefixes) },
                                   { "constraint", shacl::to_string(v.constraint) },
                                   { "message", shacl::describe(v, prefixes) } });
        }
        auto warnings = json::array();
        for (const auto& f: shacl::check_shapes(shapes))
            warnings.push_back({ { "severity", f.severity == Severity::Error ? "error" : "warning" }, { "message", f.message } });
        return { { "conforms", report.conforms }, { "violations", violations }, { "shape_findings", warnings } };
    }

    auto triples_json(const rdf::TripleSet& triples, const rdf::PrefixMap& prefixes) -> json
    {
        auto out = json::array();
        for (const auto& t: triples)
        {
            out.push_back(fmt::format("{} {} {}", rdf::to_display(t.subject, prefixes), rdf::to_display(t.predicate, prefixes),
                                      rdf::to_display(t.object, prefixes)));
        }
        return out;
    }

    // What the accepted artifact was checked against, for display next to it.
    auto task_validation(const std::string& task, const pipeline::Session& s) -> json
    {
        auto out = json { { "passed", true } };
        if ((task == "extend" || task == "correct") && s.has_schema())
        {
            auto const sub = rdf::graph_subsumes(s.base_shapes, s.shapes.source);
            auto const& prefixes = s.shapes.source.prefixes();
            out["subsumption"] = { { "subsumed", sub.subsumed },
                                   { "missing", triples_json(sub.witness.removed, prefixes) },
                                   { "added", triples_json(sub.witness.added, prefixes) } };
        }
        if (task == "instance" && s.instance)
            out["shacl"] = report_json(s.shapes, *s.instance);
        return out;
    }

    // A fresh scripted backend starts at the top of its script. Replaying the
    // assistant turns of a reloaded session consumes the steps it already used.
    auto fast_forward(llm::Backend& backend, const pipeline::Session& session) -> void
    {
        for (auto const* task: { "schema", "instance", "policy", "explain" })
        {
            auto const it = session.transcripts.find(task);
            if (it == session.transcripts.end())
                continue;
            auto prefix = llm::Conversation {};
            prefix.model_id = it->second.model_id;
            for (const auto& message: it->second.messages)
            {
                if (message.role == llm::Role::Assistant)
                {
                    try
                    {
                        (void)backend.complete(prefix, {});
                    }
                    catch (const Error&)
                    {
                        return;
                    }
                }
                prefix.messages.push_back(message);
            }
        }
    }

} // namespace

struct Service::Slot
{
    std::mutex mutex;
    std::optional<pipeline::Session> session;
    std::unique_ptr<llm::Backend> backend;
};

Service::Service(ServiceConfig cfg): _cfg(std::move(cfg))
{
    _prompts = pipeline::PromptTemplates::load(_cfg.prompts_dir.value_or(pipeline::default_prompts_dir()));
    std::filesystem::create_directories(_cfg.sessions_dir);
    if (_cfg.effective_mode() == BackendMode::Fixture)
    {
        _transport = std::make_shared<pid::FixtureTransport>(_cfg.sparql_fixtures());
        // fail at startup rather than on the first request
        (void)llm::load_script(_cfg.script_path());
    }
    else
    {
        _transport = std::make_shared<pid::HttpTransport>();
        _shared_backend = make_backend();
    }
}

Service::~Service() = default;

auto Service::make_backend() const -> std::unique_ptr<llm::Backend>
{
    if (_cfg.effective_mode() == BackendMode::Fixture)
        return std::make_unique<llm::ScriptedBackend>(llm::load_script(_cfg.script_path()), _cfg.model_id);
    auto live = llm::LiveBackendConfig {};
    live.base_url = _cfg.backend_url;
    live.model_id = _cfg.model_id;
    live.api_key = _cfg.api_key;
    live.sampling.temperature = _cfg.temperature;
    live.timeout = _cfg.backend_timeout;
    return std::make_unique<llm::LiveBackend>(live);
}

auto Service::slot(const std::string& id) -> std::shared_ptr<Slot>
{
    if (!pipeline::is_valid_session_id(id))
        throw pipeline::SessionNotFound(id);
    auto const lock = std::lock_guard(_slots_mutex);
    auto& entry = _slots[id];
    if (!entry)
        entry = std::make_shared<Slot>();
    return entry;
}

auto Service::handle(const std::string& method, const std::string& path, const std::string& body) -> HttpResponse
{
    try
    {
        return route(method, path, body);
    }
    catch (const std::exception& e)
    {
        return error_response(e);
    }
}

auto Service::route(const std::string& method, const std::string& path, const std::string& body) -> HttpResponse
{
    auto const parts = split_path(path);
    auto expect = [&](const char* wanted) {
        if (method != wanted)
            throw MethodNotAllowed(fmt::format("{} {} is not supported", method, path));
    };

    if (parts.size() == 1 && parts[0] == "config")
    {
        expect("GET");
        return json_response(200, config_view(_cfg));
    }
    if (parts.size() == 1 && parts[0] == "validate")
    {
        expect("POST");
        auto const j = parse_body(body);
        return json_response(200, validation_report(string_field(j, "shapes", true), string_field(j, "data", true)));
    }
    if (parts.empty() || parts[0] != "sessions")
        throw RouteNotFound(fmt::format("no route for {}", path));

    if (parts.size() == 1)
    {
        if (method == "POST")
            return create_session(parse_body(body));
        expect("GET");
        auto ids = std::set<std::string> {};
        if (std::filesystem::exists(_cfg.sessions_dir))
        {
            for (const auto& entry: std::filesystem::directory_iterator(_cfg.sessions_dir))
            {
                if (entry.is_directory() && std::filesystem::exists(entry.path() / "session.json"))
                    ids.insert(entry.path().filename().string());
            }
        }
        return json_response(200, { { "sessions", ids } });
    }

    auto const& id = parts[1];
    if (parts.size() == 2)
    {
        expect("GET");
        auto s = slot(id);
        auto const lock = std::lock_guard(s->mutex);
        if (!s->session)
            s->session = pipeline::load_session(_cfg.sessions_dir, id);
        return json_response(200, pipeline::session_view(*s->session));
    }
    auto const tail = parts.size() == 3 ? parts[2] : parts[2] + "/" + parts[3];
    if (parts.size() > 4)
        throw RouteNotFound(fmt::format("no route for {}", path));
    if (tail == "export")
    {
        expect("GET");
        return export_zip(id);
    }
    if (tail == "policy/evaluate")
    {
        expect("POST");
        return evaluate(id, parse_body(body));
    }
    static const std::map<std::string, std::string> tasks = {
        { "schema/extend", "extend" }, { "schema/correct", "correct" }, { "instance", "instance" },
        { "policy", "policy" },        { "explain", "explain" },
    };
    if (auto const it = tasks.find(tail); it != tasks.end())
    {
        expect("POST");
        return run_task(id, it->second, parse_body(body));
    }
    throw RouteNotFound(fmt::format("no route for {}", path));
}

auto Service::create_session(const json& body) -> HttpResponse
{
    auto id = string_field(body, "id", false);
    if (id.empty())
        id = random_session_id();
    if (!pipeline::is_valid_session_id(id))
        throw pipeline::InvalidRequest(fmt::format("invalid session id '{}'", id));

    auto shapes_text = string_field(body, "base_shapes", false);
    if (shapes_text.empty())
    {
        auto const path = _cfg.base_shapes_path();
        if (!path)
            throw pipeline::InvalidRequest("field 'base_shapes' is required: no default base shapes are configured");
        shapes_text = read_text(*path);
    }
    auto session = pipeline::make_session(id, rdf::parse_turtle(shapes_text));

    auto s = slot(id);
    auto const lock = std::lock_guard(s->mutex);
    if (s->session || std::filesystem::exists(_cfg.sessions_dir / id / "session.json"))
        throw SessionExists(id);
    pipeline::save_session(session, _cfg.sessions_dir);
    s->session = std::move(session);
    return json_response(201, pipeline::session_view(*s->session));
}

auto Service::run_task(const std::string& id, const std::string& task, const json& body) -> HttpResponse
{
    auto step = pipeline::ScenarioStep { task, string_field(body, "instruction", task != "explain"), std::nullopt };
    if (task == "extend" && body.contains("requirements") && !body.at("requirements").is_null())
        step.requirements = pipeline::requirements_from_json(body.at("requirements"));

    auto s = slot(id);
    auto const lock = std::lock_guard(s->mutex);
    if (!s->session)
        s->session = pipeline::load_session(_cfg.sessions_dir, id);
    if (!_shared_backend && !s->backend)
    {
        s->backend = make_backend();
        fast_forward(*s->backend, *s->session);
    }
    auto& backend = _shared_backend ? *_shared_backend : *s->backend;

    auto pipeline = pipeline::Pipeline(backend, _prompts, _cfg.sparql, _transport,
                                       pipeline::PipelineConfig { _cfg.max_retries, _cfg.max_tool_turns, {} });
    // work on a copy so a failed save leaves memory and disk in agreement
    auto working = *s->session;
    auto const report = pipeline::run_step(pipeline, working, step);
    pipeline::save_session(working, _cfg.sessions_dir);
    s->session = std::move(working);

    auto out = pipeline::to_json(report);
    out["validation"] = task_validation(task, *s->session);
    out["session_id"] = id;
    out["state"] = state_json(*s->session);
    return json_response(200, out);
}

auto Service::evaluate(const std::string& id, const json& body) -> HttpResponse
{
    auto s = slot(id);
    auto const lock = std::lock_guard(s->mutex);
    if (!s->session)
        s->session = pipeline::load_session(_cfg.sessions_dir, id);
    if (!s->session->policy)
        throw pipeline::TaskOrderViolation("the session has no policy yet");
    auto target = string_field(body, "target", false);
    auto const ctx = odrl::make_usage_context(string_field(body, "country", true), string_field(body, "at", true),
                                              string_field(body, "action", true),
                                              target.empty() ? std::nullopt : std::optional<std::string>(target));
    auto const decision = odrl::evaluate(*s->session->policy, ctx);
    return json_response(200, { { "outcome", odrl::to_string(decision.outcome) }, { "reasons", decision.reasons } });
}

auto export_bundle(const pipeline::ArtifactSet& a) -> std::string
{
    auto entries = std::vector<ZipEntry> {};
    auto add = [&](const char* name, const std::optional<std::string>& content) {
        if (content)
            entries.push_back({ name, *content });
    };
    add("shapes.ttl", a.shapes_turtle);
    add("instance.ttl", a.instance_turtle);
    add("policy.ttl", a.policy_turtle);
    add("explanation.txt", a.explanation_text);
    add("diagram.puml", a.diagram_text);
    auto provenance = json::object();
    for (const auto& [name, p]: a.provenance)
        provenance[name] = pipeline::to_json(p);
    entries.push_back({ "provenance.json", provenance.dump(2) + "\n" });
    return make_zip(entries);
}

auto Service::export_zip(const std::string& id) -> HttpResponse
{
    auto s = slot(id);
    auto const lock = std::lock_guard(s->mutex);
    if (!s->session)
        s->session = pipeline::load_session(_cfg.sessions_dir, id);
    auto response = HttpResponse { 200, "application/zip", export_bundle(pipeline::export_artifacts(*s->session)), {} };
    response.headers.emplace("Content-Disposition", fmt::format("attachment; filename=\"{}.zip\"", id));
    return response;
}

auto validation_report(const std::string& shapes_turtle, const std::string& data_turtle) -> json
{
    return report_json(shacl::parse_shapes(rdf::parse_turtle(shapes_turtle)), rdf::parse_turtle(data_turtle));
}

struct HttpServer::Impl
{
    explicit Impl(Service& s): service(s) {}
    Service& service;
    httplib::Server server;
};

HttpServer::HttpServer(Service& service): _impl(std::make_unique<Impl>(service))
{
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        auto const out = _impl->service.handle(req.method, req.path, req.body);
        res.status = out.status;
        for (const auto& [k, v]: out.headers)
            res.set_header(k, v);
        res.set_content(out.body, out.content_type);
    };
    auto& server = _impl->server;
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
    server.Delete(".*", handler);
    server.set_payload_max_length(16U * 1024U * 1024U);
    // LLM turns are synchronous; keep connections open long enough
    server.set_read_timeout(std::chrono::seconds(600));
    server.set_write_timeout(std::chrono::seconds(600));
}

HttpServer::~HttpServer() = default;

auto HttpServer::bind(const std::string& host, int port) -> int
{
    auto& server = _impl->server;
    if (port == 0)
    {
        auto const bound = server.bind_to_any_port(host);
        if (bound < 0)
            throw std::runtime_error(fmt::format("cannot bind {}", host));
        return bound;
    }
    if (!server.bind_to_port(host, port))
        throw std::runtime_error(fmt::format("cannot bind {}:{}", host, port));
    return port;
}

void HttpServer::listen()
{
    _impl->server.listen_after_bind();
}

void HttpServer::stop()
{
    _impl->server.stop();
}

} // namespace fairds::service
