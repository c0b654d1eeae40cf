// SPDX-License-Identifier: Apache-2.0
#include <fairds/rdf/literal.hpp>
#include <fairds/rdf/vocab.hpp>
#include <fairds/shacl/shapes.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

namespace fairds::shacl
{

using rdf::Term;
namespace sh = vocab::sh;

auto to_string(NodeKind kind) -> std::string_view
{
    switch (kind)
    {
        case NodeKind::Iri: return "sh:IRI";
        case NodeKind::BlankNode: return "sh:BlankNode";
        case NodeKind::Literal: return "sh:Literal";
        case NodeKind::BlankNodeOrIri: return "sh:BlankNodeOrIRI";
    }
    return "";
}

auto ShapeSet::find(const Term& id) const -> const NodeShape*
{
    auto const it = std::ranges::lower_bound(shapes, id, {}, &NodeShape::id);
    return it != shapes.end() && it->id == id ? &*it : nullptr;
}

namespace
{

    auto iri(std::string_view s) -> Term
    {
        return Term::iri(std::string(s));
    }

    auto shacl_local(std::string_view predicate) -> std::string
    {
        return "sh:" + std::string(predicate.substr(sh::ns.size()));
    }

    class ShapeParser
    {
      public:
        explicit ShapeParser(const rdf::Graph& graph): _graph(graph) {}

        auto run() -> ShapeSet
        {
            auto ids = std::set<Term> {};
            for (const auto& s: _graph.subjects(iri(vocab::rdf::type), iri(sh::NodeShape)))
                ids.insert(s);
            for (const auto& t: _graph)
            {
                if (t.predicate.value() != sh::node)
                    continue;
                if (t.object.is_literal())
                    throw MalformedShape(fmt::format("sh:node value {} is a literal", t.object.to_string()));
                ids.insert(t.object);
            }

            auto result = ShapeSet {};
            result.source = _graph;
            for (const auto& id: ids)
                result.shapes.push_back(shape(id));
            result.warnings = std::move(_warnings);
            check_nesting(result);
            return result;
        }

      private:
        const rdf::Graph& _graph;
        std::vector<std::string> _warnings;

        auto display(const Term& t) const -> std::string { return rdf::to_display(t, _graph.prefixes()); }

        auto shape(const Term& id) -> NodeShape
        {
            auto out = NodeShape { id, {}, {}, {}, {} };
            for (const auto& t: _graph.about(id))
            {
                auto const& p = t.predicate.value();
                if (p == sh::targetClass)
                {
                    if (!t.object.is_iri())
                        throw MalformedShape(fmt::format("shape {}: sh:targetClass must be an IRI", display(id)));
                    if (out.target_class)
                        throw MalformedShape(
                            fmt::format("shape {}: more than one sh:targetClass is not supported", display(id)));
                    out.target_class = t.object.value();
                }
                else if (p == sh::targetNode)
                {
                    if (!t.object.is_iri())
                        throw MalformedShape(fmt::format("shape {}: sh:targetNode must be an IRI", display(id)));
                    out.target_nodes.push_back(t.object.value());
                }
                else if (p == sh::property)
                {
                    if (t.object.is_literal())
                        throw MalformedShape(fmt::format("shape {}: sh:property value is a literal", display(id)));
                    out.properties.push_back(property(id, t.object));
                }
                else if (p.starts_with(sh::ns))
                {
                    out.unsupported.push_back(p);
                    _warnings.push_back(fmt::format("shape {}: unsupported SHACL component {} is ignored", display(id),
                                                    shacl_local(p)));
                }
            }
            std::ranges::sort(out.properties, [](const PropertyConstraint& a, const PropertyConstraint& b) {
                return a.path < b.path;
            });
            return out;
        }

        auto count(const Term& shape, const Term& value, std::string_view name) const -> std::size_t
        {
            auto n = std::size_t { 0 };
            auto const& lexical = value.value();
            auto const* end = lexical.data() + lexical.size();
            auto const [ptr, ec] = std::from_chars(lexical.data(), end, n);
            if (!value.is_literal() || ec != std::errc {} || ptr != end)
                throw MalformedShape(fmt::format("shape {}: {} must be a non-negative integer, got {}", display(shape),
                                                 name, display(value)));
            return n;
        }

        auto single(const Term& subject, std::string_view predicate, const Term& shape) const -> std::optional<Term>
        {
            auto const values = _graph.objects(subject, iri(predicate));
            if (values.size() > 1)
                throw MalformedShape(
                    fmt::format("shape {}: property has {} values for {}", display(shape), values.size(), shacl_local(predicate)));
            if (values.empty())
                return std::nullopt;
            return values.front();
        }

        auto single_iri(const Term& subject, std::string_view predicate, const Term& shape) const
            -> std::optional<std::string>
        {
            auto const value = single(subject, predicate, shape);
            if (!value)
                return std::nullopt;
            if (!value->is_iri())
                throw MalformedShape(
                    fmt::format("shape {}: {} must be an IRI, got {}", display(shape), shacl_local(predicate), display(*value)));
            return value->value();
        }

        auto property(const Term& shape, const Term& node) -> PropertyConstraint
        {
            auto out = PropertyConstraint {};
            auto const path = single(node, sh::path, shape);
            if (!path)
                throw MalformedShape(fmt::format("shape {}: property constraint is missing sh:path", display(shape)));
            if (!path->is_iri())
                throw MalformedShape(fmt::format("shape {}: sh:path must be a single predicate IRI, got {}", display(shape),
                                                 display(*path)));
            out.path = path->value();

            if (auto v = single(node, sh::minCount, shape))
                out.min_count = count(shape, *v, "sh:minCount");
            if (auto v = single(node, sh::maxCount, shape))
                out.max_count = count(shape, *v, "sh:maxCount");
            if (out.min_count && out.max_count && *out.min_count > *out.max_count)
                throw MalformedShape(fmt::format("shape {}: sh:minCount {} exceeds sh:maxCount {} on {}", display(shape),
                                                 *out.min_count, *out.max_count, display(*path)));
            out.datatype = single_iri(node, sh::datatype, shape);
            out.class_ = single_iri(node, sh::class_, shape);
            out.node = single(node, sh::node, shape);
            if (auto kind = single_iri(node, sh::nodeKind, shape))
            {
                if (*kind == sh::IRI)
                    out.node_kind = NodeKind::Iri;
                else if (*kind == sh::BlankNode)
                    out.node_kind = NodeKind::BlankNode;
                else if (*kind == sh::Literal)
                    out.node_kind = NodeKind::Literal;
                else if (*kind == sh::BlankNodeOrIRI)
                    out.node_kind = NodeKind::BlankNodeOrIri;
                else
                {
                    out.unsupported.push_back(std::string(sh::nodeKind));
                    _warnings.push_back(fmt::format("shape {}: node kind {} on {} is not supported and is ignored",
                                                    display(shape), display(iri(*kind)), display(*path)));
                }
            }

            static const std::set<std::string_view> known = { sh::path,     sh::minCount, sh::maxCount, sh::datatype,
                                                              sh::class_,   sh::node,     sh::nodeKind };
            for (const auto& t: _graph.about(node))
            {
                auto const& p = t.predicate.value();
                if (p.starts_with(sh::ns) && !known.contains(p))
                {
                    out.unsupported.push_back(p);
                    _warnings.push_back(fmt::format("shape {}: unsupported SHACL component {} on {} is ignored",
                                                    display(shape), shacl_local(p), display(*path)));
                }
            }
            return out;
        }

        // Rejects sh:node cycles and chains deeper than max_node_depth.
        void check_nesting(const ShapeSet& set) const
        {
            auto depth = std::map<Term, std::size_t> {};
            auto on_stack = std::set<Term> {};
            auto visit = [&](auto&& self, const NodeShape& s) -> std::size_t {
                if (auto it = depth.find(s.id); it != depth.end())
                    return it->second;
                if (!on_stack.insert(s.id).second)
                    throw CyclicNodeReference(fmt::format("sh:node references form a cycle through {}", display(s.id)));
                auto deepest = std::size_t { 0 };
                for (const auto& p: s.properties)
                {
                    if (p.node)
                        deepest = std::max(deepest, self(self, *set.find(*p.node)));
                }
                on_stack.erase(s.id);
                auto const d = deepest + 1;
                if (d > max_node_depth)
                    throw CyclicNodeReference(
                        fmt::format("sh:node nesting below {} exceeds the depth limit of {}", display(s.id), max_node_depth));
                depth[s.id] = d;
                return d;
            };
            for (const auto& s: set.shapes)
                visit(visit, s);
        }
    };

    auto is_validated_datatype(const std::string& datatype) -> bool
    {
        try
        {
            (void) rdf::validate_literal("", datatype);
            return true;
        }
        catch (const rdf::UnsupportedDatatype&)
        {
            return false;
        }
    }

} // namespace

auto parse_shapes(const rdf::Graph& graph) -> ShapeSet
{
    return ShapeParser(graph).run();
}

auto check_shapes(const ShapeSet& shapes) -> std::vector<Finding>
{
    auto findings = std::vector<Finding> {};
    auto const& prefixes = shapes.source.prefixes();
    auto show = [&](const std::string& s) { return rdf::to_display(Term::iri(s), prefixes); };
    for (const auto& shape: shapes.shapes)
    {
        auto const name = rdf::to_display(shape.id, prefixes);
        if (shape.properties.empty() && !shape.target_class && shape.target_nodes.empty()
            && !shapes.source.has_type(shape.id, Term::iri(std::string(sh::NodeShape))))
            findings.push_back(error_finding(fmt::format("shape {} is referenced via sh:node but never defined", name)));
        for (const auto& u: shape.unsupported)
            findings.push_back(
                warning_finding(fmt::format("shape {} uses {}, which is not enforced", name, shacl_local(u))));
        for (const auto& p: shape.properties)
        {
            auto const path = show(p.path);
            if (p.datatype && p.class_)
                findings.push_back(error_finding(fmt::format(
                    "shape {}: {} declares both sh:datatype and sh:class; no value can satisfy both", name, path)));
            if (p.datatype && p.node_kind && p.node_kind != NodeKind::Literal)
                findings.push_back(error_finding(fmt::format("shape {}: {} declares sh:datatype with node kind {}", name,
                                                             path, to_string(*p.node_kind))));
            if (p.class_ && p.node_kind == NodeKind::Literal)
                findings.push_back(
                    error_finding(fmt::format("shape {}: {} declares sh:class with node kind sh:Literal", name, path)));
            if (p.max_count == std::size_t { 0 } && (p.datatype || p.class_ || p.node))
                findings.push_back(warning_finding(
                    fmt::format("shape {}: {} has sh:maxCount 0, so its value constraints never apply", name, path)));
            if (p.datatype && !is_validated_datatype(*p.datatype))
                findings.push_back(warning_finding(fmt::format(
                    "shape {}: datatype {} on {} is checked by name only, not by lexical form", name, show(*p.datatype), path)));
            for (const auto& u: p.unsupported)
                findings.push_back(warning_finding(
                    fmt::format("shape {}: {} uses {}, which is not enforced", name, path, shacl_local(u))));
        }
    }
    return findings;
}

auto shape_key(const ShapeSet& shapes, const Term& id) -> std::string
{
    if (!id.is_blank())
        return id.value();
    auto const* shape = shapes.find(id);
    if (shape == nullptr)
        return "[]";
    auto out = std::string("[");
    if (shape->target_class)
        out += " targetClass=" + *shape->target_class;
    for (const auto& n: shape->target_nodes)
        out += " targetNode=" + n;
    auto properties = std::vector<std::string> {};
    for (const auto& p: shape->properties)
        properties.push_back(constraint_signature(shapes, p));
    std::ranges::sort(properties);
    for (const auto& p: properties)
        out += " property(" + p + ")";
    return out + " ]";
}

auto constraint_signature(const ShapeSet& shapes, const PropertyConstraint& c) -> std::string
{
    auto out = "path=" + c.path;
    if (c.min_count)
        out += fmt::format(" min={}", *c.min_count);
    if (c.max_count)
        out += fmt::format(" max={}", *c.max_count);
    if (c.datatype)
        out += " datatype=" + *c.datatype;
    if (c.class_)
        out += " class=" + *c.class_;
    if (c.node)
        out += " node=" + shape_key(shapes, *c.node);
    if (c.node_kind)
        out += " kind=" + std::string(to_string(*c.node_kind));
    auto unsupported = c.unsupported;
    std::ranges::sort(unsupported);
    for (const auto& u: unsupported)
        out += " unsupported=" + u;
    return out;
}

} // namespace fairds::shacl
