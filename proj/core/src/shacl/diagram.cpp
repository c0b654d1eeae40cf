// SPDX-License-Identifier: Apache-2.0
#include <fairds/shacl/diagram.hpp>

#include <fmt/format.h>

#include <map>

namespace fairds::shacl
{

namespace
{

    auto local_name(std::string_view iri) -> std::string
    {
        auto const cut = iri.find_last_of("#/:");
        return std::string(cut == std::string_view::npos ? iri : iri.substr(cut + 1));
    }

    auto cardinality(const PropertyConstraint& p) -> std::string
    {
        return fmt::format("{}..{}", p.min_count.value_or(0), p.max_count ? std::to_string(*p.max_count) : "*");
    }

    auto quoted(std::string s) -> std::string
    {
        for (auto& c: s)
        {
            if (c == '"')
                c = '\'';
        }
        return "\"" + s + "\"";
    }

} // namespace

auto export_diagram(const ShapeSet& shapes) -> std::string
{
    auto const& prefixes = shapes.source.prefixes();
    auto show = [&](const rdf::Term& t) { return rdf::to_display(t, prefixes); };
    auto show_iri = [&](const std::string& iri) { return show(rdf::Term::iri(iri)); };

    auto alias = std::map<rdf::Term, std::string> {};
    for (std::size_t i = 0; i < shapes.shapes.size(); ++i)
        alias[shapes.shapes[i].id] = fmt::format("S{}", i);

    auto out = std::string("@startuml\nhide empty methods\n");
    auto edges = std::string {};
    for (const auto& shape: shapes.shapes)
    {
        auto const& self = alias[shape.id];
        out += fmt::format("class {} as {}", quoted(show(shape.id)), self);
        if (shape.target_class)
            out += fmt::format(" <<{}>>", show_iri(*shape.target_class));
        out += " {\n";
        for (const auto& p: shape.properties)
        {
            auto type = std::string("any");
            if (p.datatype)
                type = show_iri(*p.datatype);
            else if (p.class_)
                type = show_iri(*p.class_);
            else if (p.node)
                type = show(*p.node);
            else if (p.node_kind)
                type = std::string(to_string(*p.node_kind));
            out += fmt::format("  {} : {} [{}]\n", show_iri(p.path), type, cardinality(p));

            auto target = std::optional<std::string> {};
            if (p.node)
                target = alias[*p.node];
            else if (p.class_)
            {
                for (const auto& other: shapes.shapes)
                {
                    if (other.target_class == p.class_)
                    {
                        target = alias[other.id];
                        break;
                    }
                }
            }
            if (target)
                edges += fmt::format("{} --> \"{}\" {} : {}\n", self, cardinality(p), *target, local_name(p.path));
        }
        out += "}\n";
    }
    return out + edges + "@enduml\n";
}

} // namespace fairds::shacl
