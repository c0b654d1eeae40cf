// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fairds
{

/// Base of every error raised by the library.
///
/// Each concrete error carries a stable machine code (snake_case) which the
/// HTTP service forwards verbatim in its error bodies.
class Error: public std::runtime_error
{
  public:
    Error(std::string code, const std::string& message): std::runtime_error(message), _code(std::move(code)) {}

    [[nodiscard]] auto code() const noexcept -> const std::string& { return _code; }

  private:
    std::string _code;
};

} // namespace fairds
