// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <exception>
#include <optional>
#include <string>

namespace fairds::service
{

/// HTTP rendering of a failure. Every error body is
/// `{"error": {"code", "message", "details"?}}`.
struct ApiError
{
    int status = 500;
    std::string code;
    std::string message;
    std::optional<nlohmann::json> details;
    /// Seconds for a Retry-After header.
    std::optional<long long> retry_after;
};

/// HTTP status for a machine code; unknown codes map to 500.
auto status_for_code(const std::string& code) -> int;

/// Maps any exception to its ApiError. Library errors keep their code;
/// anything else becomes `internal_error`.
auto api_error_from(const std::exception& e) -> ApiError;

auto to_json(const ApiError& error) -> nlohmann::json;

} // namespace fairds::service
