// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/shacl/shapes.hpp>

namespace fairds::shacl
{

enum class ConstraintKind
{
    MinCount,
    MaxCount,
    Datatype,
    Class,
    Node,
    NodeKind,
};

auto to_string(ConstraintKind kind) -> std::string_view;

struct Violation
{
    rdf::Term focus_node;
    std::string path;
    ConstraintKind constraint = ConstraintKind::MinCount;
    std::string message;
    std::optional<rdf::Term> value;
    rdf::Term shape;

    auto operator==(const Violation&) const -> bool = default;
};

struct ValidationReport
{
    bool conforms = true;
    /// Sorted by focus node, then path, then constraint.
    std::vector<Violation> violations;
};

/// Validates `data` against every targeted shape. Never throws for data
/// problems; everything ends up in the report.
auto validate(const rdf::Graph& data, const ShapeSet& shapes) -> ValidationReport;

/// One line per violation, using the data graph's prefixes for display.
auto describe(const Violation& v, const rdf::PrefixMap& prefixes) -> std::string;

} // namespace fairds::shacl
