// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/error.hpp>
#include <fairds/rdf/graph.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace fairds::rdf
{

/// A Turtle parse failure at a 1-based line/column position.
class ParseError: public Error
{
  public:
    ParseError(std::string code, std::size_t line, std::size_t column, std::string detail);

    [[nodiscard]] auto line() const noexcept -> std::size_t { return _line; }
    [[nodiscard]] auto column() const noexcept -> std::size_t { return _column; }
    /// The message without the position prefix.
    [[nodiscard]] auto detail() const noexcept -> const std::string& { return _detail; }

  private:
    std::size_t _line;
    std::size_t _column;
    std::string _detail;
};

class SyntaxError: public ParseError
{
  public:
    SyntaxError(std::size_t line, std::size_t column, std::string detail):
        ParseError("syntax_error", line, column, std::move(detail))
    {
    }
};

class UnresolvedPrefix: public ParseError
{
  public:
    UnresolvedPrefix(std::size_t line, std::size_t column, std::string detail):
        ParseError("unresolved_prefix", line, column, std::move(detail))
    {
    }
};

class RelativeIriWithoutBase: public ParseError
{
  public:
    RelativeIriWithoutBase(std::size_t line, std::size_t column, std::string detail):
        ParseError("relative_iri_without_base", line, column, std::move(detail))
    {
    }
};

/// Parses the supported Turtle subset: @prefix/@base (and the SPARQL-style
/// PREFIX/BASE), prefixed names, IRIREFs, `a`, predicate-object and object
/// lists, `[...]`, labeled blank nodes, quoted literals with language tag or
/// datatype, integers, decimals and booleans.
///
/// Collections, numeric exponents and triple-quoted strings are rejected with
/// a SyntaxError naming the construct.
auto parse_turtle(std::string_view text, std::optional<std::string> base_iri = std::nullopt) -> Graph;

/// Deterministic Turtle output: subjects, predicates and objects are sorted,
/// blank nodes referenced exactly once are nested inline, and every other
/// blank node is relabeled `_:bN` in order of appearance.
auto serialize_turtle(const Graph& graph) -> std::string;

/// Resolves `reference` against an absolute `base` (RFC 3986, section 5.2).
auto resolve_iri(std::string_view base, std::string_view reference) -> std::string;

/// Lowercases the scheme and, when present, the host of an absolute IRI.
auto normalize_iri(std::string_view iri) -> std::string;

} // namespace fairds::rdf
