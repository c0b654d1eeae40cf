// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace fairds::net
{

using Headers = std::multimap<std::string, std::string>;

struct HttpReply
{
    int status = 0;
    std::string body;
    Headers headers;

    [[nodiscard]] auto header(const std::string& name) const -> std::string;
};

/// Connection-level failure: DNS, refused connection, TLS, timeout.
class TransportError: public std::runtime_error
{
  public:
    TransportError(const std::string& message, bool timed_out):
        std::runtime_error(message), _timed_out(timed_out)
    {
    }
    [[nodiscard]] auto timed_out() const noexcept -> bool { return _timed_out; }

  private:
    bool _timed_out;
};

/// Percent-encodes a query parameter value.
auto encode_query_value(const std::string& value) -> std::string;

/// Splits `scheme://host[:port]/path?query` into origin and the rest.
auto split_url(const std::string& url) -> std::pair<std::string, std::string>;

auto get(const std::string& origin, const std::string& path_and_query, const Headers& headers,
         std::chrono::milliseconds timeout) -> HttpReply;

auto post(const std::string& origin, const std::string& path, const Headers& headers, const std::string& body,
          const std::string& content_type, std::chrono::milliseconds timeout) -> HttpReply;

} // namespace fairds::net
