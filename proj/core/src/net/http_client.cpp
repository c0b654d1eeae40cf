// SPDX-License-Identifier: Apache-2.0
#include "http_client.hpp"

#include <httplib.h>

#include <fmt/format.h>

namespace fairds::net
{

auto HttpReply::header(const std::string& name) const -> std::string
{
    for (const auto& [key, value]: headers)
    {
        if (httplib::detail::compare_case_ignore(key, name))
            return value;
    }
    return {};
}

auto encode_query_value(const std::string& value) -> std::string
{
    return httplib::detail::encode_query_param(value);
}

auto split_url(const std::string& url) -> std::pair<std::string, std::string>
{
    auto const scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw TransportError(fmt::format("'{}' is not an absolute http(s) URL", url), false);
    auto const path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos)
        return { url, "/" };
    return { url.substr(0, path_start), url.substr(path_start) };
}

namespace
{

    auto make_client(const std::string& origin, std::chrono::milliseconds timeout) -> httplib::Client
    {
        auto client = httplib::Client(origin);
        if (!client.is_valid())
            throw TransportError(fmt::format("unsupported endpoint '{}'", origin), false);
        auto const seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout);
        auto const micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout - seconds);
        client.set_connection_timeout(seconds.count(), micros.count());
        client.set_read_timeout(seconds.count(), micros.count());
        client.set_write_timeout(seconds.count(), micros.count());
        client.set_follow_location(true);
        return client;
    }

    auto finish(httplib::Result result, const std::string& origin) -> HttpReply
    {
        if (!result)
        {
            auto const error = result.error();
            throw TransportError(fmt::format("{}: {}", origin, httplib::to_string(error)),
                                 error == httplib::Error::Read || error == httplib::Error::Write
                                     || error == httplib::Error::ConnectionTimeout);
        }
        auto reply = HttpReply { result->status, result->body, {} };
        for (const auto& [key, value]: result->headers)
            reply.headers.emplace(key, value);
        return reply;
    }

    auto to_httplib(const Headers& headers) -> httplib::Headers
    {
        auto out = httplib::Headers {};
        for (const auto& [key, value]: headers)
            out.emplace(key, value);
        return out;
    }

} // namespace

auto get(const std::string& origin, const std::string& path_and_query, const Headers& headers,
         std::chrono::milliseconds timeout) -> HttpReply
{
    auto client = make_client(origin, timeout);
    return finish(client.Get(path_and_query, to_httplib(headers)), origin);
}

auto post(const std::string& origin, const std::string& path, const Headers& headers, const std::string& body,
          const std::string& content_type, std::chrono::milliseconds timeout) -> HttpReply
{
    auto client = make_client(origin, timeout);
    return finish(client.Post(path, to_httplib(headers), body, content_type), origin);
}

} // namespace fairds::net
