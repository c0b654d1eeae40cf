// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/error.hpp>
#include <fairds/rdf/graph.hpp>

#include <map>
#include <string>

namespace fairds::rdf
{

/// Upper bound on blank nodes for the enumeration-based graph comparisons.
inline constexpr std::size_t max_comparable_blank_nodes = 8;

class TooManyBlankNodes: public Error
{
  public:
    explicit TooManyBlankNodes(std::size_t count);
};

struct Subsumption
{
    bool subsumed = false;
    /// removed: base triples not found in `extended` under the best mapping;
    /// added: triples of `extended` outside the image of base.
    GraphDelta witness;
    /// base blank-node label -> extended blank-node label
    std::map<std::string, std::string> mapping;
};

/// Checks whether some injective mapping of base's blank nodes onto
/// extended's blank nodes embeds every base triple in `extended`.
/// Throws TooManyBlankNodes if base holds more than 8 blank nodes.
auto graph_subsumes(const Graph& base, const Graph& extended) -> Subsumption;

/// Brute-force isomorphism: enumerates every blank-node bijection.
/// Throws TooManyBlankNodes if either graph holds more than 8 blank nodes.
auto graph_isomorphic(const Graph& a, const Graph& b) -> bool;

} // namespace fairds::rdf
