// SPDX-License-Identifier: Apache-2.0
#include <fairds/odrl/policy.hpp>
#include <fairds/rdf/turtle.hpp>

auto main() -> int
{
    auto const g = fairds::rdf::parse_turtle("<http://e/s> <http://e/p> \"o\" .");
    return fairds::rdf::parse_turtle(fairds::rdf::serialize_turtle(g)) == g ? 0 : 1;
}
