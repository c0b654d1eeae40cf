// SPDX-License-Identifier: Apache-2.0
#include <fairds/llm/live.hpp>

#include "../net/http_client.hpp"

#include <fmt/format.h>

#include <charconv>

namespace fairds::llm
{

LiveBackend::LiveBackend(LiveBackendConfig config): _config(std::move(config))
{
    if (_config.base_url.empty())
        throw BackendUnavailable("no backend base URL configured");
    auto const [origin, path] = net::split_url(_config.base_url);
    _origin = origin;
    _path = path;
    while (!_path.empty() && _path.back() == '/')
        _path.pop_back();
    _path += "/chat/completions";
}

void raise_http_error(int status, const std::string& body, const std::string& retry_after)
{
    if (status == 429)
    {
        auto seconds = std::int64_t { 0 };
        auto const* end = retry_after.data() + retry_after.size();
        auto const [ptr, ec] = std::from_chars(retry_after.data(), end, seconds);
        if (!retry_after.empty() && ec == std::errc {} && ptr == end && seconds >= 0)
            throw RateLimited(std::chrono::seconds(seconds));
        throw RateLimited(std::nullopt);
    }
    auto const parsed = nlohmann::json::parse(body, nullptr, false);
    auto message = std::string {};
    auto code = std::string {};
    if (parsed.is_object() && parsed.contains("error") && parsed["error"].is_object())
    {
        message = parsed["error"].value("message", "");
        if (parsed["error"].contains("code") && parsed["error"]["code"].is_string())
            code = parsed["error"]["code"].get<std::string>();
    }
    if (code == "context_length_exceeded" || message.find("context length") != std::string::npos
        || message.find("maximum context") != std::string::npos)
        throw ContextTooLong(message.empty() ? body : message);
    if (status >= 500)
        throw BackendUnavailable(fmt::format("backend returned HTTP {}", status));
    throw MalformedResponse(fmt::format("backend rejected the request with HTTP {}: {}", status,
                                        message.empty() ? body.substr(0, 200) : message));
}

auto LiveBackend::complete(const Conversation& conv, const std::vector<ToolDefinition>& tools) -> BackendResponse
{
    auto request = make_request(conv, tools, _config.sampling);
    if (request["model"].get<std::string>().empty())
        request["model"] = _config.model_id;

    auto headers = net::Headers { { "Accept", "application/json" } };
    if (!_config.api_key.empty())
        headers.emplace("Authorization", "Bearer " + _config.api_key);

    auto const started = std::chrono::steady_clock::now();
    auto reply = net::HttpReply {};
    try
    {
        reply = net::post(_origin, _path, headers, request.dump(), "application/json", _config.timeout);
    }
    catch (const net::TransportError& e)
    {
        throw BackendUnavailable(e.what());
    }
    auto const latency =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);

    if (reply.status < 200 || reply.status >= 300)
        raise_http_error(reply.status, reply.body, reply.header("Retry-After"));

    auto const body = nlohmann::json::parse(reply.body, nullptr, false);
    if (body.is_discarded())
        throw MalformedResponse("backend reply is not JSON");
    auto response = parse_response(body);
    response.latency = latency;
    return response;
}

} // namespace fairds::llm
