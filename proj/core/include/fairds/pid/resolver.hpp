// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/error.hpp>
#include <fairds/llm/backend.hpp>

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace fairds::pid
{

/// Documented default; always overridable through configuration.
inline constexpr std::string_view default_gnd_endpoint = "https://sparql.dnb.de/api/gnd";

struct PidRecord
{
    /// Name as queried.
    std::string label;
    std::string pid;
    std::string source_endpoint;
    std::optional<std::string> entity_iri;
    /// Preferred name reported by the endpoint.
    std::string matched_name;

    auto operator==(const PidRecord&) const -> bool = default;
};

/// Digits, uppercase X and hyphen; non-empty.
auto is_valid_gnd_id(std::string_view pid) noexcept -> bool;

struct SparqlEndpointConfig
{
    std::string endpoint_url { default_gnd_endpoint };
    std::chrono::milliseconds timeout { 10'000 };
    int retries = 2;

    /// Throws InvalidEndpointConfig.
    void check() const;
};

/// Escapes `value` as the body of a double-quoted SPARQL string literal.
auto escape_sparql_string(std::string_view value) -> std::string;

/// "Caspar David Friedrich" becomes "Friedrich, Caspar David", mirroring
/// the query's REPLACE expressions.
auto inverted_name(std::string_view name) -> std::string;

/// SELECT query binding `?id` for persons whose preferred name equals
/// `name` or its inverted form, exactly or case-insensitively. Exact matches sort first.
auto build_lookup_query(std::string_view name) -> std::string;

/// Hex SHA-256 of the query text; names fixture files.
auto query_hash(std::string_view query) -> std::string;

struct SparqlReply
{
    int status = 0;
    std::string body;
};

/// Executes one SPARQL request. Throws TransportFailure for
/// connection-level problems; HTTP errors come back as a status.
class SparqlTransport
{
  public:
    virtual ~SparqlTransport() = default;
    virtual auto execute(const std::string& query, const SparqlEndpointConfig& cfg) -> SparqlReply = 0;
};

/// SPARQL 1.1 protocol over HTTP(S): GET with a `query` parameter, POST form
/// for long queries.
class HttpTransport: public SparqlTransport
{
  public:
    auto execute(const std::string& query, const SparqlEndpointConfig& cfg) -> SparqlReply override;
};

/// Serves `<dir>/<query_hash>.json`; a missing file answers 404.
class FixtureTransport: public SparqlTransport
{
  public:
    explicit FixtureTransport(std::filesystem::path dir);
    auto execute(const std::string& query, const SparqlEndpointConfig& cfg) -> SparqlReply override;

  private:
    std::filesystem::path _dir;
};

/// Forwards to another transport and stores every 200 reply as a fixture.
class RecordingTransport: public SparqlTransport
{
  public:
    RecordingTransport(std::shared_ptr<SparqlTransport> inner, std::filesystem::path dir);
    auto execute(const std::string& query, const SparqlEndpointConfig& cfg) -> SparqlReply override;

  private:
    std::shared_ptr<SparqlTransport> _inner;
    std::filesystem::path _dir;
    std::mutex _mutex;
};

/// Reads SPARQL JSON results. Records are deduplicated by id and ordered
/// exact match first, then by id.
auto parse_results(std::string_view body, std::string_view label, std::string_view endpoint) -> std::vector<PidRecord>;

/// Runs the lookup with up to `cfg.retries` retries on transport failures
/// and 5xx replies. An empty result is not an error.
auto resolve_pid(std::string_view name, const SparqlEndpointConfig& cfg, SparqlTransport& transport)
    -> std::vector<PidRecord>;

/// Session-scoped resolver with a synchronized per (endpoint, name) cache.
class PidResolver
{
  public:
    PidResolver(SparqlEndpointConfig cfg, std::shared_ptr<SparqlTransport> transport);

    auto resolve(std::string_view name) -> std::vector<PidRecord>;
    [[nodiscard]] auto config() const noexcept -> const SparqlEndpointConfig& { return _cfg; }
    /// Every pid returned so far, for unverified-identifier checks.
    [[nodiscard]] auto returned_pids() const -> std::map<std::string, std::string>;
    void remember(const std::string& pid, const std::string& endpoint);

  private:
    SparqlEndpointConfig _cfg;
    std::shared_ptr<SparqlTransport> _transport;
    mutable std::mutex _mutex;
    std::map<std::pair<std::string, std::string>, std::vector<PidRecord>> _cache;
    std::map<std::string, std::string> _returned;
};

inline constexpr std::string_view lookup_tool_name = "lookup_gnd_id";

auto tool_definition() -> llm::ToolDefinition;

/// `{"matches":[{"name","gnd_id","entity","source"}...]}`, with a
/// "no match found" message when empty.
auto tool_result(const std::vector<PidRecord>& records) -> std::string;

/// Handler for a ToolRegistry binding `lookup_gnd_id` to `resolver`.
auto tool_handler(PidResolver& resolver) -> llm::ToolRegistry::Handler;

class EmptyName: public Error
{
  public:
    EmptyName(): Error("empty_name", "name must not be empty") {}
};

class EndpointUnreachable: public Error
{
  public:
    explicit EndpointUnreachable(const std::string& detail): Error("endpoint_unreachable", detail) {}
};

class EndpointTimeout: public Error
{
  public:
    explicit EndpointTimeout(const std::string& detail): Error("endpoint_timeout", detail) {}
};

class MalformedResults: public Error
{
  public:
    explicit MalformedResults(const std::string& detail): Error("malformed_results", detail) {}
};

class InvalidEndpointConfig: public Error
{
  public:
    explicit InvalidEndpointConfig(const std::string& detail): Error("invalid_endpoint_config", detail) {}
};

class TransportFailure: public Error
{
  public:
    TransportFailure(const std::string& detail, bool timed_out):
        Error(timed_out ? "endpoint_timeout" : "endpoint_unreachable", detail), _timed_out(timed_out)
    {
    }
    [[nodiscard]] auto timed_out() const noexcept -> bool { return _timed_out; }

  private:
    bool _timed_out;
};

} // namespace fairds::pid
