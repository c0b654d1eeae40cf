// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/error.hpp>
#include <fairds/finding.hpp>
#include <fairds/rdf/graph.hpp>
#include <fairds/rdf/literal.hpp>

#include <optional>
#include <string>
#include <vector>

namespace fairds::odrl
{

enum class PolicyKind
{
    Set,
    Offer,
    Agreement,
};

enum class LeftOperand
{
    Spatial,
    DateTime,
    Unknown,
};

enum class Operator
{
    Eq,
    Neq,
    Lt,
    Lteq,
    Gt,
    Gteq,
    Unknown,
};

struct Constraint
{
    LeftOperand left_operand = LeftOperand::Unknown;
    std::string left_operand_iri;
    Operator op = Operator::Unknown;
    std::string operator_iri;
    rdf::Term right_operand;

    auto operator==(const Constraint&) const -> bool = default;
};

struct Permission
{
    std::string target;
    std::string action;
    std::vector<Constraint> constraints;

    auto operator==(const Permission&) const -> bool = default;
};

struct Policy
{
    std::string iri;
    PolicyKind kind = PolicyKind::Set;
    std::vector<Permission> permissions;
    /// Content the evaluation model does not cover (prohibitions, duties,
    /// unknown operands). Not part of equality.
    std::vector<std::string> warnings;

    auto operator==(const Policy& other) const -> bool
    {
        return iri == other.iri && kind == other.kind && permissions == other.permissions;
    }
};

/// A concrete usage request. When `target` is empty, permissions for any
/// target are considered.
struct UsageContext
{
    std::string country;
    rdf::Instant timestamp;
    std::string action;
    std::optional<std::string> target;
};

enum class Outcome
{
    Permit,
    Deny,
    NotApplicable,
};

struct Decision
{
    Outcome outcome = Outcome::NotApplicable;
    std::vector<std::string> reasons;
};

auto to_string(PolicyKind kind) -> std::string_view;
auto to_string(Outcome outcome) -> std::string_view;
auto to_string(LeftOperand operand) -> std::string_view;
auto to_string(Operator op) -> std::string_view;

class NoPolicyFound: public Error
{
  public:
    NoPolicyFound(): Error("no_policy_found", "graph contains no subject typed as an ODRL policy") {}
};

class MultiplePolicies: public Error
{
  public:
    explicit MultiplePolicies(std::size_t count);
};

class MalformedPermission: public Error
{
  public:
    explicit MalformedPermission(const std::string& detail): Error("malformed_permission", detail) {}
};

class MalformedPolicy: public Error
{
  public:
    explicit MalformedPolicy(const std::string& detail): Error("malformed_policy", detail) {}
};

class InvalidUsageContext: public Error
{
  public:
    explicit InvalidUsageContext(const std::string& detail): Error("invalid_usage_context", detail) {}
};

/// Validates the country code and timestamp, expanding an action given as a
/// bare ODRL local name (`use`) to its IRI.
auto make_usage_context(std::string country, std::string_view timestamp, std::string action,
                        std::optional<std::string> target = std::nullopt) -> UsageContext;

/// Reads the single policy in `g`. Permissions listing several targets or
/// actions are expanded into one permission per combination; a policy-level
/// target applies to permissions that have none.
auto parse_policy(const rdf::Graph& g) -> Policy;

/// Fail-closed evaluation: a permission grants the request only when every
/// one of its constraints is understood and holds.
auto evaluate(const Policy& policy, const UsageContext& ctx) -> Decision;

/// Structural problems (errors) and advisories (warnings). Deadlines are
/// compared against `now`, never against the system clock.
auto wellformed(const Policy& policy, rdf::Instant now) -> std::vector<Finding>;

auto policy_to_graph(const Policy& policy) -> rdf::Graph;

} // namespace fairds::odrl
