// SPDX-License-Identifier: Apache-2.0
#include <fairds/shacl/delta.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>

namespace fairds::shacl
{

namespace
{

    auto keyed(const ShapeSet& set) -> std::map<std::string, const NodeShape*>
    {
        auto out = std::map<std::string, const NodeShape*> {};
        for (const auto& s: set.shapes)
            out.emplace(shape_key(set, s.id), &s);
        return out;
    }

    auto targets(const NodeShape& s) -> std::pair<std::optional<std::string>, std::vector<std::string>>
    {
        auto nodes = s.target_nodes;
        std::ranges::sort(nodes);
        return { s.target_class, nodes };
    }

    struct Entry
    {
        std::string signature;
        const PropertyConstraint* constraint;
    };

    auto by_path(const ShapeSet& set, const NodeShape* shape) -> std::map<std::string, std::vector<Entry>>
    {
        auto out = std::map<std::string, std::vector<Entry>> {};
        if (shape == nullptr)
            return out;
        for (const auto& p: shape->properties)
            out[p.path].push_back({ constraint_signature(set, p), &p });
        for (auto& [path, entries]: out)
            std::ranges::sort(entries, {}, &Entry::signature);
        return out;
    }

    void diff_shape(const std::string& key, const ShapeSet& before, const NodeShape* old_shape, const ShapeSet& after,
                    const NodeShape* new_shape, ShapeDelta& delta)
    {
        auto old_paths = by_path(before, old_shape);
        auto new_paths = by_path(after, new_shape);
        auto paths = std::vector<std::string> {};
        for (const auto& [p, _]: old_paths)
            paths.push_back(p);
        for (const auto& [p, _]: new_paths)
        {
            if (!old_paths.contains(p))
                paths.push_back(p);
        }
        std::ranges::sort(paths);

        for (const auto& path: paths)
        {
            auto olds = old_paths[path];
            auto news = new_paths[path];
            // Identical constraints cancel out.
            for (auto it = olds.begin(); it != olds.end();)
            {
                auto match = std::ranges::find(news, it->signature, &Entry::signature);
                if (match != news.end())
                {
                    news.erase(match);
                    it = olds.erase(it);
                }
                else
                    ++it;
            }
            auto const paired = std::min(olds.size(), news.size());
            for (std::size_t i = 0; i < paired; ++i)
                delta.changed.push_back({ key, *olds[i].constraint, *news[i].constraint });
            for (std::size_t i = paired; i < olds.size(); ++i)
                delta.removed.push_back({ key, *olds[i].constraint });
            for (std::size_t i = paired; i < news.size(); ++i)
                delta.added.push_back({ key, *news[i].constraint });
        }
    }

    auto constraint_json(const PropertyConstraint& c, const ShapeSet& set) -> nlohmann::json
    {
        auto const& prefixes = set.source.prefixes();
        auto show = [&](const std::string& iri) { return rdf::to_display(rdf::Term::iri(iri), prefixes); };
        auto out = nlohmann::json { { "path", show(c.path) } };
        if (c.min_count)
            out["min_count"] = *c.min_count;
        if (c.max_count)
            out["max_count"] = *c.max_count;
        if (c.datatype)
            out["datatype"] = show(*c.datatype);
        if (c.class_)
            out["class"] = show(*c.class_);
        if (c.node)
            out["node"] = rdf::to_display(*c.node, prefixes);
        if (c.node_kind)
            out["node_kind"] = std::string(to_string(*c.node_kind));
        if (!c.unsupported.empty())
        {
            auto list = nlohmann::json::array();
            for (const auto& u: c.unsupported)
                list.push_back(show(u));
            out["unsupported"] = list;
        }
        return out;
    }

} // namespace

auto shape_delta(const ShapeSet& before, const ShapeSet& after) -> ShapeDelta
{
    auto delta = ShapeDelta {};
    auto const old_shapes = keyed(before);
    auto const new_shapes = keyed(after);
    for (const auto& [key, shape]: old_shapes)
    {
        auto const it = new_shapes.find(key);
        if (it == new_shapes.end())
        {
            delta.removed_shapes.push_back(key);
            diff_shape(key, before, shape, after, nullptr, delta);
            continue;
        }
        if (targets(*shape) != targets(*it->second))
            delta.retargeted_shapes.push_back(key);
        diff_shape(key, before, shape, after, it->second, delta);
    }
    for (const auto& [key, shape]: new_shapes)
    {
        if (!old_shapes.contains(key))
        {
            delta.added_shapes.push_back(key);
            diff_shape(key, before, nullptr, after, shape, delta);
        }
    }
    return delta;
}

auto to_json(const ShapeDelta& delta, const ShapeSet& before, const ShapeSet& after) -> nlohmann::json
{
    auto shape_name = [](const ShapeSet& set, const std::string& key) {
        return key.starts_with("[") ? key : rdf::to_display(rdf::Term::iri(key), set.source.prefixes());
    };
    auto out = nlohmann::json::object();
    out["added_shapes"] = nlohmann::json::array();
    for (const auto& k: delta.added_shapes)
        out["added_shapes"].push_back(shape_name(after, k));
    out["removed_shapes"] = nlohmann::json::array();
    for (const auto& k: delta.removed_shapes)
        out["removed_shapes"].push_back(shape_name(before, k));
    out["retargeted_shapes"] = nlohmann::json::array();
    for (const auto& k: delta.retargeted_shapes)
        out["retargeted_shapes"].push_back(shape_name(after, k));
    out["added"] = nlohmann::json::array();
    for (const auto& a: delta.added)
        out["added"].push_back({ { "shape", shape_name(after, a.shape) }, { "constraint", constraint_json(a.constraint, after) } });
    out["removed"] = nlohmann::json::array();
    for (const auto& r: delta.removed)
        out["removed"].push_back(
            { { "shape", shape_name(before, r.shape) }, { "constraint", constraint_json(r.constraint, before) } });
    out["changed"] = nlohmann::json::array();
    for (const auto& c: delta.changed)
        out["changed"].push_back({ { "shape", shape_name(after, c.shape) },
                                   { "before", constraint_json(c.before, before) },
                                   { "after", constraint_json(c.after, after) } });
    return out;
}

} // namespace fairds::shacl
