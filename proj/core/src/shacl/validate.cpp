// SPDX-License-Identifier: Apache-2.0
#include <fairds/rdf/literal.hpp>
#include <fairds/rdf/vocab.hpp>
#include <fairds/shacl/validate.hpp>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <set>

namespace fairds::shacl
{

using rdf::Term;

auto to_string(ConstraintKind kind) -> std::string_view
{
    switch (kind)
    {
        case ConstraintKind::MinCount: return "MinCount";
        case ConstraintKind::MaxCount: return "MaxCount";
        case ConstraintKind::Datatype: return "Datatype";
        case ConstraintKind::Class: return "Class";
        case ConstraintKind::Node: return "Node";
        case ConstraintKind::NodeKind: return "NodeKind";
    }
    return "";
}

namespace
{

    class Validator
    {
      public:
        Validator(const rdf::Graph& data, const ShapeSet& shapes): _data(data), _shapes(shapes) {}

        auto run() -> ValidationReport
        {
            auto report = ValidationReport {};
            for (const auto& shape: _shapes.shapes)
            {
                for (const auto& focus: focus_nodes(shape))
                    check(shape, focus, 0, report.violations);
            }
            std::ranges::sort(report.violations, [](const Violation& a, const Violation& b) {
                return std::tie(a.focus_node, a.path, a.constraint, a.value, a.message)
                       < std::tie(b.focus_node, b.path, b.constraint, b.value, b.message);
            });
            report.conforms = report.violations.empty();
            return report;
        }

      private:
        const rdf::Graph& _data;
        const ShapeSet& _shapes;

        auto show(const Term& t) const -> std::string { return rdf::to_display(t, _data.prefixes()); }
        auto show(const std::string& iri) const -> std::string { return show(Term::iri(iri)); }

        auto focus_nodes(const NodeShape& shape) const -> std::set<Term>
        {
            auto out = std::set<Term> {};
            if (shape.target_class)
            {
                for (const auto& s: _data.subjects(Term::iri(std::string(vocab::rdf::type)), Term::iri(*shape.target_class)))
                    out.insert(s);
            }
            for (const auto& n: shape.target_nodes)
                out.insert(Term::iri(n));
            return out;
        }

        void check(const NodeShape& shape, const Term& focus, std::size_t depth, std::vector<Violation>& out) const
        {
            for (const auto& p: shape.properties)
                check_property(shape, p, focus, depth, out);
        }

        void add(std::vector<Violation>& out, const NodeShape& shape, const Term& focus, const PropertyConstraint& p,
                 ConstraintKind kind, std::string message, std::optional<Term> value = std::nullopt) const
        {
            out.push_back(Violation { focus, p.path, kind, std::move(message), std::move(value), shape.id });
        }

        void check_property(const NodeShape& shape, const PropertyConstraint& p, const Term& focus, std::size_t depth,
                            std::vector<Violation>& out) const
        {
            auto const values = _data.objects(focus, Term::iri(p.path));
            auto const path = show(p.path);
            if (p.min_count && values.size() < *p.min_count)
                add(out, shape, focus, p, ConstraintKind::MinCount,
                    fmt::format("{} has {} value(s) for {}, at least {} required", show(focus), values.size(), path,
                                *p.min_count));
            if (p.max_count && values.size() > *p.max_count)
                add(out, shape, focus, p, ConstraintKind::MaxCount,
                    fmt::format("{} has {} value(s) for {}, at most {} allowed", show(focus), values.size(), path,
                                *p.max_count));
            for (const auto& v: values)
            {
                if (p.datatype)
                    check_datatype(shape, p, focus, v, out);
                if (p.class_ && !(v.is_literal() ? false : _data.has_type(v, Term::iri(*p.class_))))
                    add(out, shape, focus, p, ConstraintKind::Class,
                        fmt::format("value {} of {} on {} is not an instance of {}", show(v), path, show(focus),
                                    show(*p.class_)),
                        v);
                if (p.node_kind && !kind_matches(*p.node_kind, v))
                    add(out, shape, focus, p, ConstraintKind::NodeKind,
                        fmt::format("value {} of {} on {} does not have node kind {}", show(v), path, show(focus),
                                    to_string(*p.node_kind)),
                        v);
                if (p.node)
                {
                    auto nested = std::vector<Violation> {};
                    if (auto const* target = _shapes.find(*p.node); target != nullptr && depth < max_node_depth)
                        check(*target, v, depth + 1, nested);
                    if (!nested.empty())
                    {
                        auto details = std::vector<std::string> {};
                        for (const auto& n: nested)
                            details.push_back(n.message);
                        std::ranges::sort(details);
                        add(out, shape, focus, p, ConstraintKind::Node,
                            fmt::format("value {} of {} on {} does not conform to shape {}: {}", show(v), path,
                                        show(focus), show(*p.node), fmt::join(details, "; ")),
                            v);
                    }
                }
            }
        }

        void check_datatype(const NodeShape& shape, const PropertyConstraint& p, const Term& focus, const Term& v,
                            std::vector<Violation>& out) const
        {
            auto const path = show(p.path);
            auto const expected = show(*p.datatype);
            if (!v.is_literal())
            {
                add(out, shape, focus, p, ConstraintKind::Datatype,
                    fmt::format("value {} of {} on {} must be a literal of datatype {}", show(v), path, show(focus),
                                expected),
                    v);
                return;
            }
            if (v.datatype() != *p.datatype)
            {
                add(out, shape, focus, p, ConstraintKind::Datatype,
                    fmt::format("value {} of {} on {} has datatype {}, expected {}", show(v), path, show(focus),
                                show(v.datatype()), expected),
                    v);
                return;
            }
            try
            {
                if (!rdf::validate_literal(v.value(), v.datatype()))
                    add(out, shape, focus, p, ConstraintKind::Datatype,
                        fmt::format("value {} of {} on {} is not a valid {} lexical form", show(v), path, show(focus),
                                    expected),
                        v);
            }
            catch (const rdf::UnsupportedDatatype&)
            {
                // Declared datatype matched; the lexical form cannot be checked.
            }
        }

        static auto kind_matches(NodeKind kind, const Term& v) -> bool
        {
            switch (kind)
            {
                case NodeKind::Iri: return v.is_iri();
                case NodeKind::BlankNode: return v.is_blank();
                case NodeKind::Literal: return v.is_literal();
                case NodeKind::BlankNodeOrIri: return !v.is_literal();
            }
            return false;
        }
    };

} // namespace

auto validate(const rdf::Graph& data, const ShapeSet& shapes) -> ValidationReport
{
    return Validator(data, shapes).run();
}

auto describe(const Violation& v, const rdf::PrefixMap& prefixes) -> std::string
{
    return fmt::format("[{}] {} (path {})", to_string(v.constraint), v.message,
                       rdf::to_display(Term::iri(v.path), prefixes));
}

} // namespace fairds::shacl
