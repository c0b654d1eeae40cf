// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/service/config.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace fairds::cli
{

/// Exit codes: success, conforms or permit.
inline constexpr int exit_ok = 0;
/// Non-conforming data, deny, no match or a task that failed validation.
inline constexpr int exit_negative = 1;
/// Usage and operational errors.
inline constexpr int exit_error = 2;

/// Runs the `fairds` command line; `args` excludes the program name.
auto run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
         const service::EnvLookup& env = service::process_environment()) -> int;

} // namespace fairds::cli
