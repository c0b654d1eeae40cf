// SPDX-License-Identifier: Apache-2.0
#include <fairds/pid/resolver.hpp>
#include <fairds/rdf/vocab.hpp>

#include "../net/http_client.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace fairds::pid
{

auto is_valid_gnd_id(std::string_view pid) noexcept -> bool
{
    return !pid.empty()
           && std::ranges::all_of(pid, [](char c) { return (c >= '0' && c <= '9') || c == 'X' || c == '-'; });
}

void SparqlEndpointConfig::check() const
{
    if (endpoint_url.empty())
        throw InvalidEndpointConfig("endpoint URL must not be empty");
    if (timeout.count() <= 0)
        throw InvalidEndpointConfig("timeout must be positive");
    if (retries < 0)
        throw InvalidEndpointConfig("retries must not be negative");
}

auto escape_sparql_string(std::string_view value) -> std::string
{
    auto out = std::string {};
    out.reserve(value.size() + 8);
    for (char c: value)
    {
        switch (c)
        {
            case '"': out += "\\\""; break;
            case '\'': out += "\\'"; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            default: out += c;
        }
    }
    return out;
}

namespace
{

    auto trim(std::string_view s) -> std::string_view
    {
        auto const ws = std::string_view(" \t\r\n\f\v");
        auto const first = s.find_first_not_of(ws);
        if (first == std::string_view::npos)
            return {};
        return s.substr(first, s.find_last_not_of(ws) - first + 1);
    }

} // namespace

auto inverted_name(std::string_view name) -> std::string
{
    auto const label = trim(name);
    auto const space = label.rfind(' ');
    if (space == std::string_view::npos)
        return std::string(label) + ", " + std::string(label);
    return std::string(label.substr(space + 1)) + ", " + std::string(label.substr(0, space));
}

auto build_lookup_query(std::string_view name) -> std::string
{
    auto const label = trim(name);
    if (label.empty())
        throw EmptyName();
    // GND stores preferred person names as "Surname, Forenames"; the
    // inverted form is derived inside the query so the name occurs once.
    return fmt::format(
        "PREFIX gndo: <{}>\n"
        "SELECT DISTINCT ?entity ?id ?name WHERE {{\n"
        "  VALUES ?query {{ \"{}\" }}\n"
        "  BIND(CONCAT(REPLACE(?query, \"^.* \", \"\"), \", \", REPLACE(?query, \" [^ ]*$\", \"\")) AS ?inverted)\n"
        "  ?entity gndo:preferredNameForThePerson ?name ;\n"
        "          gndo:gndIdentifier ?id .\n"
        "  FILTER(STR(?name) = ?query || STR(?name) = ?inverted\n"
        "         || LCASE(STR(?name)) = LCASE(?query) || LCASE(STR(?name)) = LCASE(?inverted))\n"
        "}}\n"
        "ORDER BY DESC(STR(?name) = ?query || STR(?name) = ?inverted) ?id\n"
        "LIMIT 50\n",
        vocab::gndo::ns, escape_sparql_string(label));
}

auto query_hash(std::string_view query) -> std::string
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(query.data(), query.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    auto out = std::string {};
    for (unsigned int i = 0; i < length; ++i)
        out += fmt::format("{:02x}", digest[i]);
    return out;
}

namespace
{

    // Above this URL length the query is sent as a POST form.
    constexpr std::size_t max_get_url = 2000;

} // namespace

auto HttpTransport::execute(const std::string& query, const SparqlEndpointConfig& cfg) -> SparqlReply
{
    try
    {
        auto const [origin, path] = net::split_url(cfg.endpoint_url);
        auto const headers = net::Headers { { "Accept", "application/sparql-results+json" } };
        auto const encoded = net::encode_query_value(query);
        auto reply = net::HttpReply {};
        if (cfg.endpoint_url.size() + encoded.size() + 7 <= max_get_url)
        {
            auto const separator = path.find('?') == std::string::npos ? "?" : "&";
            reply = net::get(origin, path + separator + "query=" + encoded, headers, cfg.timeout);
        }
        else
            reply = net::post(origin, path, headers, "query=" + encoded, "application/x-www-form-urlencoded", cfg.timeout);
        return { reply.status, std::move(reply.body) };
    }
    catch (const net::TransportError& e)
    {
        throw TransportFailure(e.what(), e.timed_out());
    }
}

FixtureTransport::FixtureTransport(std::filesystem::path dir): _dir(std::move(dir)) {}

auto FixtureTransport::execute(const std::string& query, const SparqlEndpointConfig&) -> SparqlReply
{
    auto const file = _dir / (query_hash(query) + ".json");
    auto in = std::ifstream(file, std::ios::binary);
    if (!in)
        return { 404, fmt::format("no fixture recorded for this query ({})", file.filename().string()) };
    auto buffer = std::ostringstream {};
    buffer << in.rdbuf();
    return { 200, buffer.str() };
}

RecordingTransport::RecordingTransport(std::shared_ptr<SparqlTransport> inner, std::filesystem::path dir):
    _inner(std::move(inner)), _dir(std::move(dir))
{
}

auto RecordingTransport::execute(const std::string& query, const SparqlEndpointConfig& cfg) -> SparqlReply
{
    auto reply = _inner->execute(query, cfg);
    if (reply.status == 200)
    {
        auto const lock = std::scoped_lock(_mutex);
        std::filesystem::create_directories(_dir);
        auto const target = _dir / (query_hash(query) + ".json");
        auto const temp = std::filesystem::path(target.string() + ".tmp");
        {
            auto out = std::ofstream(temp, std::ios::binary | std::ios::trunc);
            out << reply.body;
        }
        std::filesystem::rename(temp, target);
    }
    return reply;
}

auto parse_results(std::string_view body, std::string_view label, std::string_view endpoint) -> std::vector<PidRecord>
{
    auto const j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw MalformedResults("results are not a JSON object");
    auto const results = j.find("results");
    if (results == j.end() || !results->is_object() || !results->contains("bindings")
        || !results->at("bindings").is_array())
        throw MalformedResults("results have no bindings array");

    auto value_of = [](const nlohmann::json& binding, const char* var) -> std::optional<std::string> {
        auto const it = binding.find(var);
        if (it == binding.end())
            return std::nullopt;
        if (!it->is_object() || !it->contains("value") || !it->at("value").is_string())
            throw MalformedResults(fmt::format("binding for ?{} has no string value", var));
        return it->at("value").get<std::string>();
    };

    auto records = std::vector<PidRecord> {};
    auto seen = std::set<std::string> {};
    for (const auto& binding: results->at("bindings"))
    {
        if (!binding.is_object())
            throw MalformedResults("binding is not an object");
        auto id = value_of(binding, "id");
        if (!id)
            throw MalformedResults("binding lacks ?id");
        if (!is_valid_gnd_id(*id))
            throw MalformedResults(fmt::format("'{}' is not a GND identifier", *id));
        if (!seen.insert(*id).second)
            continue;
        records.push_back(PidRecord { std::string(label), std::move(*id), std::string(endpoint), value_of(binding, "entity"),
                                      value_of(binding, "name").value_or("") });
    }
    auto const inverted = inverted_name(label);
    std::ranges::stable_sort(records, [&](const PidRecord& a, const PidRecord& b) {
        auto const exact_a = a.matched_name == label || a.matched_name == inverted;
        auto const exact_b = b.matched_name == label || b.matched_name == inverted;
        if (exact_a != exact_b)
            return exact_a;
        return a.pid < b.pid;
    });
    return records;
}

auto resolve_pid(std::string_view name, const SparqlEndpointConfig& cfg, SparqlTransport& transport)
    -> std::vector<PidRecord>
{
    cfg.check();
    auto const query = build_lookup_query(name);
    auto const label = trim(name);
    auto last_error = std::string {};
    auto timed_out = false;
    for (int attempt = 0; attempt <= cfg.retries; ++attempt)
    {
        try
        {
            auto const reply = transport.execute(query, cfg);
            if (reply.status == 200)
                return parse_results(reply.body, label, cfg.endpoint_url);
            last_error = fmt::format("HTTP {}", reply.status);
            timed_out = false;
            if (reply.status < 500)
                throw EndpointUnreachable(
                    fmt::format("{} answered {}: {}", cfg.endpoint_url, reply.status, reply.body.substr(0, 200)));
        }
        catch (const TransportFailure& e)
        {
            last_error = e.what();
            timed_out = e.timed_out();
        }
    }
    auto const detail = fmt::format("{} failed after {} attempt(s): {}", cfg.endpoint_url, cfg.retries + 1, last_error);
    if (timed_out)
        throw EndpointTimeout(detail);
    throw EndpointUnreachable(detail);
}

PidResolver::PidResolver(SparqlEndpointConfig cfg, std::shared_ptr<SparqlTransport> transport):
    _cfg(std::move(cfg)), _transport(std::move(transport))
{
    _cfg.check();
}

auto PidResolver::resolve(std::string_view name) -> std::vector<PidRecord>
{
    auto key = std::pair { _cfg.endpoint_url, std::string(trim(name)) };
    {
        auto const lock = std::scoped_lock(_mutex);
        if (auto const it = _cache.find(key); it != _cache.end())
            return it->second;
    }
    auto records = resolve_pid(name, _cfg, *_transport);
    auto const lock = std::scoped_lock(_mutex);
    for (const auto& r: records)
        _returned.emplace(r.pid, r.source_endpoint);
    return _cache.try_emplace(std::move(key), std::move(records)).first->second;
}

auto PidResolver::returned_pids() const -> std::map<std::string, std::string>
{
    auto const lock = std::scoped_lock(_mutex);
    return _returned;
}

void PidResolver::remember(const std::string& pid, const std::string& endpoint)
{
    auto const lock = std::scoped_lock(_mutex);
    _returned.emplace(pid, endpoint);
}

auto tool_definition() -> llm::ToolDefinition
{
    return llm::ToolDefinition {
        std::string(lookup_tool_name),
        "Look up the GND identifier of a person by their preferred name. Call this whenever the metadata needs a "
        "persistent identifier for a person; never invent identifiers.",
        { llm::ToolParameter { "name", llm::ParameterType::String, "Full name of the person, e.g. as written on the work",
                               true } },
    };
}

auto tool_result(const std::vector<PidRecord>& records) -> std::string
{
    auto matches = nlohmann::json::array();
    for (const auto& r: records)
    {
        auto m = nlohmann::json { { "gnd_id", r.pid }, { "name", r.matched_name }, { "source", r.source_endpoint } };
        if (r.entity_iri)
            m["entity"] = *r.entity_iri;
        matches.push_back(std::move(m));
    }
    auto out = nlohmann::json { { "matches", matches } };
    if (records.empty())
        out["message"] = "no match found";
    return out.dump();
}

auto tool_handler(PidResolver& resolver) -> llm::ToolRegistry::Handler
{
    return [&resolver](const nlohmann::json& arguments) -> std::string {
        auto const& name = arguments.at("name");
        if (!name.is_string())
            return nlohmann::json { { "error", "argument 'name' must be a string" } }.dump();
        try
        {
            return tool_result(resolver.resolve(name.get<std::string>()));
        }
        catch (const Error& e)
        {
            return nlohmann::json { { "error", e.what() }, { "code", e.code() } }.dump();
        }
    };
}

} // namespace fairds::pid
