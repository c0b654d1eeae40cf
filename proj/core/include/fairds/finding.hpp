// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace fairds
{

enum class Severity
{
    Error,
    Warning,
};

/// One diagnostic from a well-formedness check or pipeline validator.
/// Only errors block an artifact; warnings are reported alongside it.
struct Finding
{
    Severity severity = Severity::Error;
    std::string message;

    auto operator==(const Finding&) const -> bool = default;
};

inline auto error_finding(std::string message) -> Finding
{
    return { Severity::Error, std::move(message) };
}

inline auto warning_finding(std::string message) -> Finding
{
    return { Severity::Warning, std::move(message) };
}

inline auto has_errors(const std::vector<Finding>& findings) -> bool
{
    for (const auto& f: findings)
    {
        if (f.severity == Severity::Error)
            return true;
    }
    return false;
}

} // namespace fairds
