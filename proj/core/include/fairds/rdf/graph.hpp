// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/rdf/term.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fairds::rdf
{

/// A single RDF statement. The subject is never a literal and the predicate is
/// always an IRI; the constructor rejects anything else.
struct Triple
{
    Term subject;
    Term predicate;
    Term object;

    Triple(Term s, Term p, Term o);

    auto operator<=>(const Triple&) const = default;
    auto operator==(const Triple&) const -> bool = default;

    [[nodiscard]] auto to_string() const -> std::string;
};

struct SubjectKey
{
    const Term& subject;
};

struct SubjectPredicateKey
{
    const Term& subject;
    const Term& predicate;
};

struct TripleOrder
{
    using is_transparent = void;

    auto operator()(const Triple& a, const Triple& b) const -> bool { return a < b; }
    auto operator()(const Triple& a, const SubjectKey& k) const -> bool { return a.subject < k.subject; }
    auto operator()(const SubjectKey& k, const Triple& a) const -> bool { return k.subject < a.subject; }
    auto operator()(const Triple& a, const SubjectPredicateKey& k) const -> bool
    {
        return std::tie(a.subject, a.predicate) < std::tie(k.subject, k.predicate);
    }
    auto operator()(const SubjectPredicateKey& k, const Triple& a) const -> bool
    {
        return std::tie(k.subject, k.predicate) < std::tie(a.subject, a.predicate);
    }
};

using TripleSet = std::set<Triple, TripleOrder>;
using PrefixMap = std::map<std::string, std::string>;

/// A set of triples plus prefix metadata. Equality ignores prefixes.
class Graph
{
  public:
    Graph() = default;

    /// Returns false if the triple was already present.
    auto insert(Triple t) -> bool;
    auto insert(Term s, Term p, Term o) -> bool { return insert(Triple(std::move(s), std::move(p), std::move(o))); }
    auto erase(const Triple& t) -> bool;
    [[nodiscard]] auto contains(const Triple& t) const -> bool { return _triples.contains(t); }

    [[nodiscard]] auto size() const noexcept -> std::size_t { return _triples.size(); }
    [[nodiscard]] auto empty() const noexcept -> bool { return _triples.empty(); }
    [[nodiscard]] auto triples() const noexcept -> const TripleSet& { return _triples; }
    [[nodiscard]] auto begin() const { return _triples.begin(); }
    [[nodiscard]] auto end() const { return _triples.end(); }

    [[nodiscard]] auto prefixes() const noexcept -> const PrefixMap& { return _prefixes; }
    void set_prefix(std::string label, std::string ns) { _prefixes[std::move(label)] = std::move(ns); }
    void set_prefixes(PrefixMap prefixes) { _prefixes = std::move(prefixes); }

    /// Objects of all triples (s, p, ?o), in term order.
    [[nodiscard]] auto objects(const Term& s, const Term& p) const -> std::vector<Term>;
    /// Object of (s, p, ?o) when exactly one exists.
    [[nodiscard]] auto object(const Term& s, const Term& p) const -> std::optional<Term>;
    /// Triples with subject s.
    [[nodiscard]] auto about(const Term& s) const -> std::vector<Triple>;
    /// Subjects of all triples (?s, p, o).
    [[nodiscard]] auto subjects(const Term& p, const Term& o) const -> std::vector<Term>;
    [[nodiscard]] auto has_type(const Term& s, const Term& type) const -> bool;

    /// Labels of all blank nodes appearing in subject or object position.
    [[nodiscard]] auto blank_nodes() const -> std::set<std::string>;

    auto operator==(const Graph& other) const -> bool { return _triples == other._triples; }

  private:
    TripleSet _triples;
    PrefixMap _prefixes;
};

/// Triples added and removed between two graphs.
struct GraphDelta
{
    TripleSet added;
    TripleSet removed;

    [[nodiscard]] auto empty() const noexcept -> bool { return added.empty() && removed.empty(); }
};

/// Compact rendering of a term using the given prefixes (`ex:foo`, `"x"@de`, `_:b0`).
auto to_display(const Term& term, const PrefixMap& prefixes) -> std::string;

} // namespace fairds::rdf
