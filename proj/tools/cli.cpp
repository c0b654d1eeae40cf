// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <fairds/odrl/policy.hpp>
#include <fairds/pipeline/scenario.hpp>
#include <fairds/rdf/turtle.hpp>
#include <fairds/service/service.hpp>
#include <fairds/shacl/diagram.hpp>
#include <fairds/shacl/validate.hpp>

#include <CLI11.hpp>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <atomic>
#include <csignal>
#include <fstream>
#include <sstream>

namespace fairds::cli
{

namespace
{

    auto read_text(const std::string& path) -> std::string
    {
        auto in = std::ifstream(path, std::ios::binary);
        if (!in)
            throw std::runtime_error(fmt::format("cannot read {}", path));
        auto buffer = std::ostringstream {};
        buffer << in.rdbuf();
        return buffer.str();
    }

    auto read_graph(const std::string& path) -> rdf::Graph
    {
        return rdf::parse_turtle(read_text(path));
    }

    std::atomic<service::HttpServer*> running_server { nullptr };

    extern "C" void stop_on_signal(int /*signal*/)
    {
        if (auto* server = running_server.load())
            server->stop();
    }

    /// Options shared by the commands that need backend or endpoint settings.
    struct ConfigFlags
    {
        std::string config_file;
        std::string fixtures;
        std::string sparql_endpoint;
        std::optional<long long> sparql_timeout_ms;
        std::optional<int> sparql_retries;

        void add_to(CLI::App& app, bool with_config_file)
        {
            if (with_config_file)
                app.add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);
            app.add_option("--fixtures", fixtures, "Fixture root with scripts/ and sparql/");
            app.add_option("--sparql-endpoint", sparql_endpoint, "SPARQL endpoint URL");
            app.add_option("--sparql-timeout-ms", sparql_timeout_ms, "Per-attempt SPARQL timeout");
            app.add_option("--sparql-retries", sparql_retries, "Retries after a failed SPARQL attempt");
        }

        /// file < environment < flags
        auto resolve(const service::EnvLookup& env) const -> service::ServiceConfig
        {
            auto cfg = service::ServiceConfig {};
            if (!config_file.empty())
                service::apply_config_file(cfg, config_file);
            service::apply_environment(cfg, env);
            if (!fixtures.empty())
                cfg.fixtures = fixtures;
            if (!sparql_endpoint.empty())
                cfg.sparql.endpoint_url = sparql_endpoint;
            if (sparql_timeout_ms)
                cfg.sparql.timeout = std::chrono::milliseconds(*sparql_timeout_ms);
            if (sparql_retries)
                cfg.sparql.retries = *sparql_retries;
            return cfg;
        }
    };

    auto cmd_validate(const std::string& data_path, const std::string& shapes_path, bool as_json, std::ostream& out,
                      std::ostream& err) -> int
    {
        if (as_json)
        {
            auto const report = service::validation_report(read_text(shapes_path), read_text(data_path));
            out << report.dump(2) << '\n';
            return report.at("conforms").get<bool>() ? exit_ok : exit_negative;
        }
        auto const shapes = shacl::parse_shapes(read_graph(shapes_path));
        for (const auto& f: shacl::check_shapes(shapes))
            fmt::print(err, "{}: {}\n", f.severity == Severity::Error ? "error" : "warning", f.message);
        auto const data = read_graph(data_path);
        auto const report = shacl::validate(data, shapes);
        if (report.conforms)
        {
            out << "conforms\n";
            return exit_ok;
        }
        for (const auto& v: report.violations)
            out << shacl::describe(v, data.prefixes()) << '\n';
        fmt::print(out, "does not conform: {} violation(s)\n", report.violations.size());
        return exit_negative;
    }

    auto cmd_policy_eval(const std::string& policy_path, const std::string& country, const std::string& at,
                         const std::string& action, const std::string& target, std::ostream& out, std::ostream& err) -> int
    {
        auto const policy = odrl::parse_policy(read_graph(policy_path));
        for (const auto& w: policy.warnings)
            fmt::print(err, "warning: {}\n", w);
        auto const ctx = odrl::make_usage_context(country, at, action,
                                                  target.empty() ? std::nullopt : std::optional<std::string>(target));
        auto const decision = odrl::evaluate(policy, ctx);
        out << odrl::to_string(decision.outcome) << '\n';
        for (const auto& r: decision.reasons)
            out << "  " << r << '\n';
        return decision.outcome == odrl::Outcome::Permit ? exit_ok : exit_negative;
    }

    auto cmd_resolve(const std::string& name, const ConfigFlags& flags, const std::string& record_dir, bool show_query,
                     const service::EnvLookup& env, std::ostream& out) -> int
    {
        auto const cfg = flags.resolve(env);
        cfg.sparql.check();
        if (show_query)
        {
            auto const query = pid::build_lookup_query(name);
            fmt::print(out, "# query sha256 {}\n{}\n", pid::query_hash(query), query);
        }
        auto transport = std::shared_ptr<pid::SparqlTransport> {};
        if (cfg.fixtures)
            transport = std::make_shared<pid::FixtureTransport>(cfg.sparql_fixtures());
        else
            transport = std::make_shared<pid::HttpTransport>();
        if (!record_dir.empty())
            transport = std::make_shared<pid::RecordingTransport>(transport, record_dir);
        auto const records = pid::resolve_pid(name, cfg.sparql, *transport);
        if (records.empty())
        {
            out << "no match found\n";
            return exit_negative;
        }
        for (const auto& r: records)
            fmt::print(out, "{}\t{}\t{}\n", r.pid, r.matched_name, r.source_endpoint);
        return exit_ok;
    }

    auto cmd_diagram(const std::string& shapes_path, const std::string& output, std::ostream& out) -> int
    {
        auto const text = shacl::export_diagram(shacl::parse_shapes(read_graph(shapes_path)));
        if (output.empty())
            out << text;
        else
            pipeline::write_file_atomic(output, text);
        return exit_ok;
    }

    auto cmd_session_run(const std::string& scenario_path, const std::string& out_dir, const std::string& prompts_dir,
                         std::ostream& out) -> int
    {
        auto const scenario = pipeline::load_scenario(scenario_path);
        auto const prompts =
            pipeline::PromptTemplates::load(prompts_dir.empty() ? pipeline::default_prompts_dir() : std::filesystem::path(prompts_dir));
        auto const result = pipeline::run_scenario(scenario, prompts);
        for (const auto& r: result.reports)
            fmt::print(out, "{}: attempts={} repairs={} warnings={}\n", r.task, r.attempts, r.repair_log.size(),
                       r.warnings.size());
        if (!out_dir.empty())
        {
            pipeline::save_session(result.session, out_dir);
            fmt::print(out, "session written to {}\n", (std::filesystem::path(out_dir) / result.session.id).string());
        }
        return exit_ok;
    }

    auto cmd_serve(ConfigFlags const& flags, const std::string& host, std::optional<int> port,
                   const std::string& sessions_dir, const std::string& mode, const std::string& backend_url,
                   const std::string& model, const std::string& api_key_file, std::optional<int> max_retries,
                   const std::string& prompts_dir, const service::EnvLookup& env, std::ostream& out) -> int
    {
        auto cfg = flags.resolve(env);
        if (!host.empty())
            cfg.host = host;
        if (port)
            cfg.port = *port;
        if (!sessions_dir.empty())
            cfg.sessions_dir = sessions_dir;
        if (!mode.empty())
            service::apply_config_json(cfg, nlohmann::json { { "mode", mode } }, {});
        if (!backend_url.empty())
            cfg.backend_url = backend_url;
        if (!model.empty())
            cfg.model_id = model;
        if (!api_key_file.empty())
            cfg.api_key_file = api_key_file;
        if (max_retries)
            cfg.max_retries = *max_retries;
        if (!prompts_dir.empty())
            cfg.prompts_dir = prompts_dir;
        service::finalize(cfg);

        auto svc = service::Service(cfg);
        auto server = service::HttpServer(svc);
        auto const bound = server.bind(cfg.host, cfg.port);
        fmt::print(out, "listening on http://{}:{} ({} mode)\n", cfg.host, bound, service::to_string(cfg.effective_mode()));
        out.flush();
        running_server = &server;
        std::signal(SIGINT, stop_on_signal);
        std::signal(SIGTERM, stop_on_signal);
        server.listen();
        running_server = nullptr;
        return exit_ok;
    }

} // namespace

auto run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const service::EnvLookup& env) -> int
{
    auto app = CLI::App("FAIR metadata toolkit: SHACL, ODRL, persistent identifiers and LLM-assisted curation", "fairds");
    app.require_subcommand(1);
    app.set_version_flag("--version", "fairds 0.1.0");

    auto* validate = app.add_subcommand("validate", "Validate Turtle data against SHACL shapes");
    auto data_path = std::string {};
    auto shapes_path = std::string {};
    auto as_json = false;
    validate->add_option("data", data_path, "Data graph (Turtle)")->required()->check(CLI::ExistingFile);
    validate->add_option("--shapes", shapes_path, "Shapes graph (Turtle)")->required()->check(CLI::ExistingFile);
    validate->add_flag("--json", as_json, "Print the report as JSON");

    auto* policy_eval = app.add_subcommand("policy-eval", "Evaluate an ODRL policy for a usage request");
    auto policy_path = std::string {};
    auto country = std::string {};
    auto at = std::string {};
    auto action = std::string("use");
    auto target = std::string {};
    policy_eval->add_option("policy", policy_path, "Policy graph (Turtle)")->required()->check(CLI::ExistingFile);
    policy_eval->add_option("--country", country, "ISO 3166-1 alpha-2 country code")->required();
    policy_eval->add_option("--at", at, "Usage time as xsd:dateTime")->required();
    policy_eval->add_option("--action", action, "Action IRI or ODRL local name")->capture_default_str();
    policy_eval->add_option("--target", target, "Asset IRI");

    auto* resolve = app.add_subcommand("resolve-pid", "Look up a person's GND identifier");
    auto name = std::string {};
    auto record_dir = std::string {};
    auto show_query = false;
    auto resolve_flags = ConfigFlags {};
    resolve->add_option("name", name, "Person name")->required();
    resolve->add_option("--record", record_dir, "Write live replies as fixtures into this directory");
    resolve->add_flag("--show-query", show_query, "Print the SPARQL query and its fixture hash");
    resolve_flags.add_to(*resolve, true);

    auto* diagram = app.add_subcommand("diagram", "Render shapes as a PlantUML class diagram");
    auto diagram_shapes = std::string {};
    auto diagram_out = std::string {};
    diagram->add_option("shapes", diagram_shapes, "Shapes graph (Turtle)")->required()->check(CLI::ExistingFile);
    diagram->add_option("-o,--output", diagram_out, "Write to a file instead of stdout");

    auto* session = app.add_subcommand("session", "Offline session commands");
    session->require_subcommand(1);
    auto* session_run = session->add_subcommand("run", "Replay a scripted scenario end to end");
    auto scenario_path = std::string {};
    auto session_out = std::string {};
    auto prompts_dir = std::string {};
    session_run->add_option("scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    session_run->add_option("--out", session_out, "Sessions directory to write the result into");
    session_run->add_option("--prompts", prompts_dir, "Prompt template directory");

    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    auto serve_flags = ConfigFlags {};
    auto host = std::string {};
    auto port = std::optional<int> {};
    auto sessions_dir = std::string {};
    auto mode = std::string {};
    auto backend_url = std::string {};
    auto model = std::string {};
    auto api_key_file = std::string {};
    auto max_retries = std::optional<int> {};
    auto serve_prompts = std::string {};
    serve_flags.add_to(*serve, true);
    serve->add_option("--host", host, "Listen address");
    serve->add_option("--port", port, "Listen port; 0 picks a free port");
    serve->add_option("--sessions-dir", sessions_dir, "Session storage directory");
    serve->add_option("--mode", mode, "fixture or live")->check(CLI::IsMember({ "fixture", "live" }));
    serve->add_option("--backend-url", backend_url, "OpenAI-compatible base URL, e.g. https://host/v1");
    serve->add_option("--model", model, "Model id");
    serve->add_option("--api-key-file", api_key_file, "File holding the API key")->check(CLI::ExistingFile);
    serve->add_option("--max-retries", max_retries, "Correction turns per task");
    serve->add_option("--prompts", serve_prompts, "Prompt template directory");

    auto argv_storage = std::vector<std::string> { "fairds" };
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    auto argv = std::vector<const char*> {};
    for (const auto& a: argv_storage)
        argv.push_back(a.c_str());

    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::ParseError& e)
    {
        auto const code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_error;
    }

    try
    {
        if (validate->parsed())
            return cmd_validate(data_path, shapes_path, as_json, out, err);
        if (policy_eval->parsed())
            return cmd_policy_eval(policy_path, country, at, action, target, out, err);
        if (resolve->parsed())
            return cmd_resolve(name, resolve_flags, record_dir, show_query, env, out);
        if (diagram->parsed())
            return cmd_diagram(diagram_shapes, diagram_out, out);
        if (session_run->parsed())
            return cmd_session_run(scenario_path, session_out, prompts_dir, out);
        if (serve->parsed())
            return cmd_serve(serve_flags, host, port, sessions_dir, mode, backend_url, model, api_key_file, max_retries,
                             serve_prompts, env, out);
    }
    catch (const pipeline::RepairExhausted& e)
    {
        fmt::print(err, "error [{}]: {}\n", e.code(), e.what());
        for (const auto& f: e.findings())
            fmt::print(err, "  - {}\n", f);
        return exit_negative;
    }
    catch (const llm::MaxTurnsExceeded& e)
    {
        fmt::print(err, "error [{}]: {}\n", e.code(), e.what());
        return exit_negative;
    }
    catch (const Error& e)
    {
        fmt::print(err, "error [{}]: {}\n", e.code(), e.what());
        return exit_error;
    }
    catch (const std::exception& e)
    {
        fmt::print(err, "error: {}\n", e.what());
        return exit_error;
    }
    return exit_error;
}

} // namespace fairds::cli
