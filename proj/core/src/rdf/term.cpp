// SPDX-License-Identifier: Apache-2.0
#include <fairds/rdf/graph.hpp>
#include <fairds/rdf/term.hpp>
#include <fairds/rdf/vocab.hpp>

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace fairds::rdf
{

namespace
{
    auto lowercase(std::string_view s) -> std::string
    {
        auto out = std::string(s);
        std::ranges::transform(out, out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return out;
    }

    auto escape_literal(std::string_view s) -> std::string
    {
        auto out = std::string {};
        out.reserve(s.size());
        for (char c: s)
        {
            switch (c)
            {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\r': out += "\\r"; break;
                case '\t': out += "\\t"; break;
                default: out += c;
            }
        }
        return out;
    }
} // namespace

auto Term::iri(std::string value) -> Term
{
    auto t = Term {};
    t._kind = TermKind::Iri;
    t._value = std::move(value);
    return t;
}

auto Term::blank(std::string label) -> Term
{
    auto t = Term {};
    t._kind = TermKind::BlankNode;
    t._value = std::move(label);
    return t;
}

auto Term::literal(std::string lexical) -> Term
{
    return typed_literal(std::move(lexical), std::string(vocab::xsd::string));
}

auto Term::typed_literal(std::string lexical, std::string datatype) -> Term
{
    auto t = Term {};
    t._kind = TermKind::Literal;
    t._value = std::move(lexical);
    t._datatype = std::move(datatype);
    return t;
}

auto Term::lang_literal(std::string lexical, std::string_view language) -> Term
{
    auto t = typed_literal(std::move(lexical), std::string(vocab::rdf::langString));
    t._language = lowercase(language);
    return t;
}

auto Term::to_string() const -> std::string
{
    switch (_kind)
    {
        case TermKind::Iri: return "<" + _value + ">";
        case TermKind::BlankNode: return "_:" + _value;
        case TermKind::Literal:
            if (!_language.empty())
                return "\"" + escape_literal(_value) + "\"@" + _language;
            if (_datatype == vocab::xsd::string)
                return "\"" + escape_literal(_value) + "\"";
            return "\"" + escape_literal(_value) + "\"^^<" + _datatype + ">";
    }
    return {};
}

auto has_scheme(std::string_view iri) noexcept -> bool
{
    if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri.front())))
        return false;
    for (std::size_t i = 1; i < iri.size(); ++i)
    {
        auto const c = static_cast<unsigned char>(iri[i]);
        if (c == ':')
            return true;
        if (!std::isalnum(c) && c != '+' && c != '-' && c != '.')
            return false;
    }
    return false;
}

Triple::Triple(Term s, Term p, Term o): subject(std::move(s)), predicate(std::move(p)), object(std::move(o))
{
    if (subject.is_literal())
        throw std::invalid_argument("triple subject must not be a literal");
    if (!predicate.is_iri())
        throw std::invalid_argument("triple predicate must be an IRI");
}

auto Triple::to_string() const -> std::string
{
    return subject.to_string() + " " + predicate.to_string() + " " + object.to_string() + " .";
}

auto to_display(const Term& term, const PrefixMap& prefixes) -> std::string
{
    auto compact = [&](const std::string& iri) -> std::string {
        auto best = prefixes.end();
        for (auto it = prefixes.begin(); it != prefixes.end(); ++it)
        {
            if (!it->second.empty() && iri.starts_with(it->second)
                && (best == prefixes.end() || it->second.size() > best->second.size()))
                best = it;
        }
        if (best == prefixes.end())
            return "<" + iri + ">";
        return best->first + ":" + iri.substr(best->second.size());
    };

    switch (term.kind())
    {
        case TermKind::Iri: return compact(term.value());
        case TermKind::BlankNode: return "_:" + term.value();
        case TermKind::Literal:
            if (!term.language().empty())
                return "\"" + escape_literal(term.value()) + "\"@" + term.language();
            if (term.datatype() == vocab::xsd::string)
                return "\"" + escape_literal(term.value()) + "\"";
            return "\"" + escape_literal(term.value()) + "\"^^" + compact(term.datatype());
    }
    return {};
}

} // namespace fairds::rdf
