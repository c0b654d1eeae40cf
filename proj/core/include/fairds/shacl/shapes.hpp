// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/error.hpp>
#include <fairds/finding.hpp>
#include <fairds/rdf/graph.hpp>

#include <optional>
#include <string>
#include <vector>

namespace fairds::shacl
{

enum class NodeKind
{
    Iri,
    BlankNode,
    Literal,
    BlankNodeOrIri,
};

auto to_string(NodeKind kind) -> std::string_view;

struct PropertyConstraint
{
    std::string path;
    std::optional<std::size_t> min_count;
    std::optional<std::size_t> max_count;
    std::optional<std::string> datatype;
    std::optional<std::string> class_;
    std::optional<rdf::Term> node;
    std::optional<NodeKind> node_kind;
    /// SHACL predicates present on the property but not enforced (sh:or, sh:pattern, ...).
    std::vector<std::string> unsupported;
};

struct NodeShape
{
    rdf::Term id;
    std::optional<std::string> target_class;
    std::vector<std::string> target_nodes;
    std::vector<PropertyConstraint> properties;
    std::vector<std::string> unsupported;
};

/// Parsed shapes, sorted by id. Immutable once built.
struct ShapeSet
{
    std::vector<NodeShape> shapes;
    rdf::Graph source;
    std::vector<std::string> warnings;

    [[nodiscard]] auto find(const rdf::Term& id) const -> const NodeShape*;
};

class MalformedShape: public Error
{
  public:
    explicit MalformedShape(const std::string& detail): Error("malformed_shape", detail) {}
};

class CyclicNodeReference: public Error
{
  public:
    explicit CyclicNodeReference(const std::string& detail): Error("cyclic_node_reference", detail) {}
};

/// Maximum sh:node nesting depth accepted by parse_shapes.
inline constexpr std::size_t max_node_depth = 16;

/// Builds the shape model from a shapes graph. Subjects typed sh:NodeShape
/// and every sh:node target become shapes. Unsupported SHACL predicates
/// become warnings and are ignored during validation.
auto parse_shapes(const rdf::Graph& graph) -> ShapeSet;

/// Checks that go beyond what parse_shapes rejects outright: constraint
/// combinations no value can satisfy, references to undefined shapes,
/// unenforced components and datatypes without lexical validation.
auto check_shapes(const ShapeSet& shapes) -> std::vector<Finding>;

/// Canonical text of a shape reference: the IRI, or a bracketed rendering of
/// the shape's content when the shape is a blank node.
auto shape_key(const ShapeSet& shapes, const rdf::Term& id) -> std::string;

/// Canonical text of a constraint, independent of blank-node labels.
auto constraint_signature(const ShapeSet& shapes, const PropertyConstraint& c) -> std::string;

} // namespace fairds::shacl
