// SPDX-License-Identifier: Apache-2.0
#include <fairds/rdf/graph.hpp>
#include <fairds/rdf/vocab.hpp>

namespace fairds::rdf
{

auto Graph::insert(Triple t) -> bool
{
    return _triples.insert(std::move(t)).second;
}

auto Graph::erase(const Triple& t) -> bool
{
    return _triples.erase(t) > 0;
}

auto Graph::objects(const Term& s, const Term& p) const -> std::vector<Term>
{
    auto out = std::vector<Term> {};
    auto [first, last] = _triples.equal_range(SubjectPredicateKey { s, p });
    for (auto it = first; it != last; ++it)
        out.push_back(it->object);
    return out;
}

auto Graph::object(const Term& s, const Term& p) const -> std::optional<Term>
{
    auto [first, last] = _triples.equal_range(SubjectPredicateKey { s, p });
    if (first == last || std::next(first) != last)
        return std::nullopt;
    return first->object;
}

auto Graph::about(const Term& s) const -> std::vector<Triple>
{
    auto [first, last] = _triples.equal_range(SubjectKey { s });
    return { first, last };
}

auto Graph::subjects(const Term& p, const Term& o) const -> std::vector<Term>
{
    auto out = std::vector<Term> {};
    for (const auto& t: _triples)
    {
        if (t.predicate == p && t.object == o && (out.empty() || out.back() != t.subject))
            out.push_back(t.subject);
    }
    return out;
}

auto Graph::has_type(const Term& s, const Term& type) const -> bool
{
    return contains(Triple(s, Term::iri(std::string(vocab::rdf::type)), type));
}

auto Graph::blank_nodes() const -> std::set<std::string>
{
    auto out = std::set<std::string> {};
    for (const auto& t: _triples)
    {
        if (t.subject.is_blank())
            out.insert(t.subject.value());
        if (t.object.is_blank())
            out.insert(t.object.value());
    }
    return out;
}

} // namespace fairds::rdf
