// SPDX-License-Identifier: Apache-2.0
#include <fairds/service/config.hpp>

#include <nlohmann/json.hpp>

#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fairds::service
{

using nlohmann::json;

auto to_string(BackendMode mode) -> std::string_view
{
    return mode == BackendMode::Fixture ? "fixture" : "live";
}

namespace
{

    auto mode_from_string(const std::string& name) -> BackendMode
    {
        if (name == "fixture")
            return BackendMode::Fixture;
        if (name == "live")
            return BackendMode::Live;
        throw InvalidConfig(fmt::format("mode must be 'fixture' or 'live', not '{}'", name));
    }

    auto resolve(const std::filesystem::path& base_dir, const std::string& value) -> std::filesystem::path
    {
        auto const p = std::filesystem::path(value);
        return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
    }

    void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where)
    {
        for (const auto& [key, _]: j.items())
        {
            if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
                throw InvalidConfig(fmt::format("unknown key '{}' in {}", key, where));
        }
    }

    auto read_trimmed(const std::filesystem::path& path) -> std::string
    {
        auto in = std::ifstream(path, std::ios::binary);
        if (!in)
            throw InvalidConfig(fmt::format("cannot read {}", path.string()));
        auto buffer = std::ostringstream {};
        buffer << in.rdbuf();
        auto text = buffer.str();
        while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' '))
            text.pop_back();
        return text;
    }

} // namespace

auto ServiceConfig::effective_mode() const -> BackendMode
{
    if (mode)
        return *mode;
    return fixtures ? BackendMode::Fixture : BackendMode::Live;
}

auto ServiceConfig::script_path() const -> std::filesystem::path
{
    if (script)
        return *script;
    return fixtures.value_or(".") / "scripts" / "museum.json";
}

auto ServiceConfig::sparql_fixtures() const -> std::filesystem::path
{
    return fixtures.value_or(".") / "sparql";
}

auto ServiceConfig::base_shapes_path() const -> std::optional<std::filesystem::path>
{
    if (base_shapes)
        return base_shapes;
    if (fixtures && std::filesystem::exists(*fixtures / "shapes" / "base.ttl"))
        return *fixtures / "shapes" / "base.ttl";
    return std::nullopt;
}

void apply_config_json(ServiceConfig& cfg, const json& j, const std::filesystem::path& base_dir)
{
    if (!j.is_object())
        throw InvalidConfig("config must be a JSON object");
    try
    {
        reject_unknown(j,
                       { "listen", "sessions_dir", "mode", "fixtures", "script", "backend", "sparql", "max_retries",
                         "max_tool_turns", "prompts_dir", "base_shapes" },
                       "config");
        if (j.contains("listen"))
        {
            auto const& l = j.at("listen");
            reject_unknown(l, { "host", "port" }, "listen");
            cfg.host = l.value("host", cfg.host);
            cfg.port = l.value("port", cfg.port);
        }
        if (j.contains("sessions_dir"))
            cfg.sessions_dir = resolve(base_dir, j.at("sessions_dir").get<std::string>());
        if (j.contains("mode"))
            cfg.mode = mode_from_string(j.at("mode").get<std::string>());
        if (j.contains("fixtures"))
            cfg.fixtures = resolve(base_dir, j.at("fixtures").get<std::string>());
        if (j.contains("script"))
            cfg.script = resolve(base_dir, j.at("script").get<std::string>());
        if (j.contains("backend"))
        {
            auto const& b = j.at("backend");
            reject_unknown(b, { "base_url", "model", "api_key_file", "temperature", "timeout_s" }, "backend");
            if (b.contains("api_key"))
                throw InvalidConfig("api keys are read from FAIRDS_API_KEY or a key file");
            cfg.backend_url = b.value("base_url", cfg.backend_url);
            cfg.model_id = b.value("model", cfg.model_id);
            if (b.contains("api_key_file"))
                cfg.api_key_file = resolve(base_dir, b.at("api_key_file").get<std::string>());
            cfg.temperature = b.value("temperature", cfg.temperature);
            if (b.contains("timeout_s"))
                cfg.backend_timeout = std::chrono::seconds(b.at("timeout_s").get<long long>());
        }
        if (j.contains("sparql"))
        {
            auto const& s = j.at("sparql");
            reject_unknown(s, { "endpoint", "timeout_ms", "retries" }, "sparql");
            cfg.sparql.endpoint_url = s.value("endpoint", cfg.sparql.endpoint_url);
            if (s.contains("timeout_ms"))
                cfg.sparql.timeout = std::chrono::milliseconds(s.at("timeout_ms").get<long long>());
            cfg.sparql.retries = s.value("retries", cfg.sparql.retries);
        }
        cfg.max_retries = j.value("max_retries", cfg.max_retries);
        cfg.max_tool_turns = j.value("max_tool_turns", cfg.max_tool_turns);
        if (j.contains("prompts_dir"))
            cfg.prompts_dir = resolve(base_dir, j.at("prompts_dir").get<std::string>());
        if (j.contains("base_shapes"))
            cfg.base_shapes = resolve(base_dir, j.at("base_shapes").get<std::string>());
    }
    catch (const json::exception& e)
    {
        throw InvalidConfig(fmt::format("invalid config: {}", e.what()));
    }
}

void apply_config_file(ServiceConfig& cfg, const std::filesystem::path& path)
{
    auto in = std::ifstream(path);
    if (!in)
        throw InvalidConfig(fmt::format("cannot read config file {}", path.string()));
    auto j = json {};
    try
    {
        j = json::parse(in);
    }
    catch (const json::exception& e)
    {
        throw InvalidConfig(fmt::format("config file {} is not JSON: {}", path.string(), e.what()));
    }
    apply_config_json(cfg, j, path.parent_path());
}

void apply_environment(ServiceConfig& cfg, const EnvLookup& env)
{
    if (auto v = env("FAIRDS_BACKEND_URL"))
        cfg.backend_url = *v;
    if (auto v = env("FAIRDS_MODEL"))
        cfg.model_id = *v;
    if (auto v = env("FAIRDS_API_KEY"))
        cfg.api_key = *v;
    if (auto v = env("FAIRDS_API_KEY_FILE"))
        cfg.api_key_file = *v;
    if (auto v = env("FAIRDS_SPARQL_ENDPOINT"))
        cfg.sparql.endpoint_url = *v;
    if (auto v = env("FAIRDS_FIXTURES"))
        cfg.fixtures = *v;
    if (auto v = env("FAIRDS_SESSIONS_DIR"))
        cfg.sessions_dir = *v;
    if (auto v = env("FAIRDS_MODE"))
        cfg.mode = mode_from_string(*v);
}

auto process_environment() -> EnvLookup
{
    return [](const char* name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name); v != nullptr && *v != '\0')
            return std::string(v);
        return std::nullopt;
    };
}

void finalize(ServiceConfig& cfg)
{
    if (cfg.api_key_file)
        cfg.api_key = read_trimmed(*cfg.api_key_file);
    if (cfg.port < 0 || cfg.port > 65535)
        throw InvalidConfig(fmt::format("port {} is out of range", cfg.port));
    if (cfg.max_retries < 0)
        throw InvalidConfig("max_retries must not be negative");
    if (cfg.max_tool_turns < 1)
        throw InvalidConfig("max_tool_turns must be at least 1");
    if (cfg.effective_mode() == BackendMode::Fixture)
    {
        if (!cfg.fixtures)
            throw InvalidConfig("fixture mode requires a fixtures path");
        if (!std::filesystem::is_regular_file(cfg.script_path()))
            throw InvalidConfig(fmt::format("fixture script {} does not exist", cfg.script_path().string()));
    }
    else
    {
        if (cfg.backend_url.empty())
            throw InvalidConfig("live mode requires a backend base URL");
        try
        {
            cfg.sparql.check();
        }
        catch (const Error& e)
        {
            throw InvalidConfig(e.what());
        }
    }
}

auto config_view(const ServiceConfig& cfg) -> json
{
    auto const mode = cfg.effective_mode();
    auto out = json {
        { "mode", to_string(mode) },
        // live mode sends prompts, shapes and instances to the configured backend
        { "data_leaves_machine", mode == BackendMode::Live },
        { "max_retries", cfg.max_retries },
        { "max_tool_turns", cfg.max_tool_turns },
    };
    if (mode == BackendMode::Live)
    {
        out["backend"] = { { "base_url", cfg.backend_url },
                           { "model", cfg.model_id },
                           { "api_key_configured", !cfg.api_key.empty() } };
        out["sparql"] = { { "endpoint", cfg.sparql.endpoint_url },
                          { "timeout_ms", cfg.sparql.timeout.count() },
                          { "retries", cfg.sparql.retries } };
    }
    else
    {
        out["fixtures"] = { { "script", cfg.script_path().string() }, { "sparql", cfg.sparql_fixtures().string() } };
    }
    return out;
}

} // namespace fairds::service
