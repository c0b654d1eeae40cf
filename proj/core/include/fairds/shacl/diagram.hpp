// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/shacl/shapes.hpp>

namespace fairds::shacl
{

/// PlantUML class diagram: one class per node shape, one attribute per
/// property constraint (`path : type [min..max]`) and one association per
/// sh:node reference, or per sh:class reference resolvable to a shape that
/// targets the class.
auto export_diagram(const ShapeSet& shapes) -> std::string;

} // namespace fairds::shacl
