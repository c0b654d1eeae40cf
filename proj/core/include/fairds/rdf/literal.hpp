// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/error.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fairds::rdf
{

class UnsupportedDatatype: public Error
{
  public:
    explicit UnsupportedDatatype(std::string_view datatype);
};

/// Checks a lexical form against the lexical space of a supported datatype:
/// xsd:string, xsd:dateTime, xsd:date, xsd:integer, xsd:decimal,
/// xsd:boolean, rdf:langString. Throws UnsupportedDatatype otherwise.
auto validate_literal(std::string_view lexical, std::string_view datatype) -> bool;

/// A point in time, UTC, with nanosecond resolution.
struct Instant
{
    std::int64_t seconds = 0; ///< since 1970-01-01T00:00:00Z
    std::int32_t nanos = 0;

    auto operator<=>(const Instant&) const = default;
};

/// Parses an xsd:dateTime lexical form. A value without timezone offset is
/// taken as UTC.
auto parse_datetime(std::string_view lexical) -> std::optional<Instant>;

/// Renders `YYYY-MM-DDThh:mm:ss[.fff]Z`.
auto format_datetime(Instant instant) -> std::string;

} // namespace fairds::rdf
