// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fairds::testing
{

enum class SparqlTokenKind
{
    Iri,
    PrefixedName,
    Variable,
    String,
    Number,
    Word,
    Punct,
};

struct SparqlToken
{
    SparqlTokenKind kind;
    /// Raw text, except for strings where it is the decoded value.
    std::string text;

    auto operator==(const SparqlToken&) const -> bool = default;
};

/// Independent SPARQL 1.1 lexer for test oracles. Decodes ECHAR and UCHAR
/// escapes inside string literals; throws std::runtime_error on input that
/// is not lexically valid (unterminated strings, raw newlines in short
/// strings, unknown escapes).
auto lex_sparql(std::string_view query) -> std::vector<SparqlToken>;

} // namespace fairds::testing

namespace fairds::testing
{

/// Returns an empty string when the lookup query for `name` lexes to the
/// same token sequence as a reference query except for exactly one string
/// literal whose decoded value is the trimmed name; otherwise a reason.
auto lookup_query_isolation_failure(std::string_view name) -> std::string;

/// Adversarial names: fixed cases plus `random_count` generated ones.
auto adversarial_names(unsigned seed, std::size_t random_count) -> std::vector<std::string>;

} // namespace fairds::testing
