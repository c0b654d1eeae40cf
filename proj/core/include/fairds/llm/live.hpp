// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/llm/backend.hpp>
#include <fairds/llm/wire.hpp>

namespace fairds::llm
{

struct LiveBackendConfig
{
    /// Base URL up to and including the API version, e.g. `https://host/v1`.
    std::string base_url;
    std::string model_id;
    /// Sent as a bearer token when non-empty.
    std::string api_key;
    SamplingOptions sampling;
    std::chrono::seconds timeout { 120 };
};

/// Chat-completions client over HTTP(S). Each call opens its own connection
/// so concurrent calls share no state.
class LiveBackend: public Backend
{
  public:
    explicit LiveBackend(LiveBackendConfig config);

    auto complete(const Conversation& conv, const std::vector<ToolDefinition>& tools) -> BackendResponse override;
    [[nodiscard]] auto model_id() const -> std::string override { return _config.model_id; }

  private:
    LiveBackendConfig _config;
    std::string _origin;
    std::string _path;
};

/// Maps a non-2xx reply to the matching error. `retry_after` is the raw
/// header value, if any.
[[noreturn]] void raise_http_error(int status, const std::string& body, const std::string& retry_after);

} // namespace fairds::llm
