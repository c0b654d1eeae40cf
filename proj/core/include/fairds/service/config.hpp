// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/error.hpp>
#include <fairds/pid/resolver.hpp>

#include <nlohmann/json_fwd.hpp>

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace fairds::service
{

enum class BackendMode
{
    /// Scripted backend and SPARQL fixtures; nothing leaves the machine.
    Fixture,
    /// OpenAI-compatible chat endpoint and live SPARQL endpoint.
    Live,
};

auto to_string(BackendMode mode) -> std::string_view;

/// Settings layered as file < environment < flags. The API key never comes
/// from a flag: only from FAIRDS_API_KEY or a key file.
struct ServiceConfig
{
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path sessions_dir = "sessions";
    std::optional<BackendMode> mode;

    /// Fixture root holding `scripts/` and `sparql/`.
    std::optional<std::filesystem::path> fixtures;
    /// Script replayed by each session in fixture mode; defaults to
    /// `<fixtures>/scripts/museum.json`.
    std::optional<std::filesystem::path> script;

    std::string backend_url;
    std::string model_id = "gpt-4";
    std::optional<std::filesystem::path> api_key_file;
    /// Filled from the environment or the key file by finalize().
    std::string api_key;
    double temperature = 0.0;
    std::chrono::seconds backend_timeout { 120 };

    pid::SparqlEndpointConfig sparql;
    int max_retries = 2;
    int max_tool_turns = 4;
    std::optional<std::filesystem::path> prompts_dir;
    /// Shapes a new session starts from when the request carries none.
    std::optional<std::filesystem::path> base_shapes;

    [[nodiscard]] auto effective_mode() const -> BackendMode;
    [[nodiscard]] auto script_path() const -> std::filesystem::path;
    [[nodiscard]] auto sparql_fixtures() const -> std::filesystem::path;
    [[nodiscard]] auto base_shapes_path() const -> std::optional<std::filesystem::path>;
};

/// Applies a config file object. Relative paths resolve against `base_dir`.
/// Unknown keys are rejected. Throws InvalidConfig.
void apply_config_json(ServiceConfig& cfg, const nlohmann::json& j, const std::filesystem::path& base_dir);
void apply_config_file(ServiceConfig& cfg, const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const char* name)>;

/// Reads FAIRDS_BACKEND_URL, FAIRDS_MODEL, FAIRDS_API_KEY, FAIRDS_API_KEY_FILE,
/// FAIRDS_SPARQL_ENDPOINT, FAIRDS_FIXTURES, FAIRDS_SESSIONS_DIR and FAIRDS_MODE.
void apply_environment(ServiceConfig& cfg, const EnvLookup& env);
auto process_environment() -> EnvLookup;

/// Loads the key file when set and checks the invariants: fixture mode
/// needs a fixtures path, live mode a backend URL. Throws InvalidConfig.
void finalize(ServiceConfig& cfg);

/// Public view for GET /config. Secrets are reduced to a flag.
auto config_view(const ServiceConfig& cfg) -> nlohmann::json;

class InvalidConfig: public Error
{
  public:
    explicit InvalidConfig(const std::string& detail): Error("invalid_config", detail) {}
};

} // namespace fairds::service
