// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace fairds::rdf
{

enum class TermKind : std::uint8_t
{
    Iri,
    BlankNode,
    Literal,
};

/// An RDF term: IRI, blank node or literal.
///
/// Literals always carry a datatype. A literal with a language tag has
/// datatype rdf:langString and its tag is stored lowercase; a literal built
/// without an explicit datatype is an xsd:string.
class Term
{
  public:
    Term() = default;

    static auto iri(std::string value) -> Term;
    static auto blank(std::string label) -> Term;
    static auto literal(std::string lexical) -> Term;
    static auto typed_literal(std::string lexical, std::string datatype) -> Term;
    static auto lang_literal(std::string lexical, std::string_view language) -> Term;

    [[nodiscard]] auto kind() const noexcept -> TermKind { return _kind; }
    [[nodiscard]] auto is_iri() const noexcept -> bool { return _kind == TermKind::Iri; }
    [[nodiscard]] auto is_blank() const noexcept -> bool { return _kind == TermKind::BlankNode; }
    [[nodiscard]] auto is_literal() const noexcept -> bool { return _kind == TermKind::Literal; }

    /// IRI string, blank-node label or literal lexical form.
    [[nodiscard]] auto value() const noexcept -> const std::string& { return _value; }
    [[nodiscard]] auto datatype() const noexcept -> const std::string& { return _datatype; }
    [[nodiscard]] auto language() const noexcept -> const std::string& { return _language; }

    auto operator<=>(const Term&) const = default;
    auto operator==(const Term&) const -> bool = default;

    /// N-Triples style rendering, used in messages and diagnostics.
    [[nodiscard]] auto to_string() const -> std::string;

  private:
    TermKind _kind = TermKind::Iri;
    std::string _value;
    std::string _datatype;
    std::string _language;
};

/// True when `iri` starts with a URI scheme followed by ':'.
auto has_scheme(std::string_view iri) noexcept -> bool;

} // namespace fairds::rdf

template <>
struct std::hash<fairds::rdf::Term>
{
    auto operator()(const fairds::rdf::Term& t) const noexcept -> std::size_t
    {
        auto h = std::hash<std::string> {}(t.value());
        h ^= std::hash<std::string> {}(t.datatype()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<std::string> {}(t.language()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h ^ static_cast<std::size_t>(t.kind());
    }
};
