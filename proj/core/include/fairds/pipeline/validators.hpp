// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/finding.hpp>
#include <fairds/rdf/graph.hpp>
#include <fairds/rdf/literal.hpp>
#include <fairds/shacl/shapes.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fairds::pipeline
{

/// A pure check of a generated graph. Validators never throw; problems are
/// returned as findings.
struct Validator
{
    std::string name;
    std::function<std::vector<Finding>(const rdf::Graph&)> check;
};

/// Runs each validator in order and concatenates the findings. A validator
/// that throws contributes one error finding naming it.
auto run_validators(const std::vector<Validator>& validators, const rdf::Graph& graph) -> std::vector<Finding>;

/// The graph parses as shapes and passes check_shapes.
auto shape_wellformed_validator() -> Validator;

/// The graph still contains every triple of `base`, up to blank-node renaming.
auto monotonicity_validator(rdf::Graph base) -> Validator;

/// What the curator asked the extension to contain.
struct PathRequirement
{
    std::string path;
    std::optional<std::string> datatype;
    std::optional<std::string> class_;

    auto operator==(const PathRequirement&) const -> bool = default;
};

struct SchemaRequirements
{
    std::vector<PathRequirement> required;
    /// When set, constrained paths beyond the base shapes and `required`
    /// are reported.
    bool closed = false;

    [[nodiscard]] auto empty() const noexcept -> bool { return required.empty() && !closed; }
    auto operator==(const SchemaRequirements&) const -> bool = default;
};

/// Checks the shapes against `requirements`; `base` supplies the paths that
/// were present before the extension.
auto requirements_validator(SchemaRequirements requirements, rdf::Graph base) -> Validator;

/// The data conforms to `shapes` and holds at least one focus node.
auto conformance_validator(shacl::ShapeSet shapes) -> Validator;

/// Every gndo:gndIdentifier literal was returned by the lookup tool.
/// `known` is consulted at check time so lookups made during the same
/// generation count.
auto verified_pid_validator(std::function<std::map<std::string, std::string>()> known) -> Validator;

/// parse_policy succeeds, wellformed reports no errors and the policy IRI
/// equals `expected_iri`.
auto policy_validator(std::string expected_iri, rdf::Instant now) -> Validator;

/// Prefix map used when naming terms in findings.
auto display_prefixes(const rdf::Graph& graph) -> rdf::PrefixMap;

} // namespace fairds::pipeline
