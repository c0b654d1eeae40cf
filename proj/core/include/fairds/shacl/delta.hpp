// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/shacl/shapes.hpp>

#include <nlohmann/json_fwd.hpp>

namespace fairds::shacl
{

struct ConstraintRef
{
    std::string shape;
    PropertyConstraint constraint;
};

struct ConstraintChange
{
    std::string shape;
    PropertyConstraint before;
    PropertyConstraint after;
};

/// Constraint-level difference between two shape sets. Shapes are matched by
/// shape_key; constraints of added or removed shapes are listed as well.
struct ShapeDelta
{
    std::vector<std::string> added_shapes;
    std::vector<std::string> removed_shapes;
    /// Shapes present in both whose target declarations differ.
    std::vector<std::string> retargeted_shapes;
    std::vector<ConstraintRef> added;
    std::vector<ConstraintRef> removed;
    std::vector<ConstraintChange> changed;

    [[nodiscard]] auto empty() const noexcept -> bool
    {
        return added_shapes.empty() && removed_shapes.empty() && retargeted_shapes.empty() && added.empty()
               && removed.empty() && changed.empty();
    }
};

auto shape_delta(const ShapeSet& before, const ShapeSet& after) -> ShapeDelta;

auto to_json(const ShapeDelta& delta, const ShapeSet& before, const ShapeSet& after) -> nlohmann::json;

} // namespace fairds::shacl
