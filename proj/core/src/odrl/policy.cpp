// SPDX-License-Identifier: Apache-2.0
#include <fairds/odrl/policy.hpp>
#include <fairds/rdf/vocab.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <set>

namespace fairds::odrl
{

using rdf::Term;
namespace vo = vocab::odrl;

MultiplePolicies::MultiplePolicies(std::size_t count):
    Error("multiple_policies", fmt::format("graph contains {} ODRL policies; exactly one is expected", count))
{
}

auto to_string(PolicyKind kind) -> std::string_view
{
    switch (kind)
    {
        case PolicyKind::Set: return "Set";
        case PolicyKind::Offer: return "Offer";
        case PolicyKind::Agreement: return "Agreement";
    }
    return "";
}

auto to_string(Outcome outcome) -> std::string_view
{
    switch (outcome)
    {
        case Outcome::Permit: return "Permit";
        case Outcome::Deny: return "Deny";
        case Outcome::NotApplicable: return "NotApplicable";
    }
    return "";
}

auto to_string(LeftOperand operand) -> std::string_view
{
    switch (operand)
    {
        case LeftOperand::Spatial: return "spatial";
        case LeftOperand::DateTime: return "dateTime";
        case LeftOperand::Unknown: return "unknown";
    }
    return "";
}

auto to_string(Operator op) -> std::string_view
{
    switch (op)
    {
        case Operator::Eq: return "eq";
        case Operator::Neq: return "neq";
        case Operator::Lt: return "lt";
        case Operator::Lteq: return "lteq";
        case Operator::Gt: return "gt";
        case Operator::Gteq: return "gteq";
        case Operator::Unknown: return "unknown";
    }
    return "";
}

namespace
{

    auto iri(std::string_view s) -> Term
    {
        return Term::iri(std::string(s));
    }

    auto is_country_code(std::string_view s) -> bool
    {
        return s.size() == 2 && std::ranges::all_of(s, [](char c) { return c >= 'A' && c <= 'Z'; });
    }

    auto left_operand_of(std::string_view iri) -> LeftOperand
    {
        if (iri == vo::spatial)
            return LeftOperand::Spatial;
        if (iri == vo::dateTime)
            return LeftOperand::DateTime;
        return LeftOperand::Unknown;
    }

    auto operator_of(std::string_view iri) -> Operator
    {
        static const std::pair<std::string_view, Operator> table[] = {
            { vo::eq, Operator::Eq },     { vo::neq, Operator::Neq }, { vo::lt, Operator::Lt },
            { vo::lteq, Operator::Lteq }, { vo::gt, Operator::Gt },   { vo::gteq, Operator::Gteq },
        };
        for (const auto& [name, op]: table)
        {
            if (name == iri)
                return op;
        }
        return Operator::Unknown;
    }

    auto operand_name(const Constraint& c) -> std::string
    {
        return c.left_operand == LeftOperand::Unknown ? "<" + c.left_operand_iri + ">"
                                                      : std::string(to_string(c.left_operand));
    }

    auto operator_name(const Constraint& c) -> std::string
    {
        return c.op == Operator::Unknown ? "<" + c.operator_iri + ">" : std::string(to_string(c.op));
    }

    auto describe(const Constraint& c) -> std::string
    {
        return fmt::format("{} {} {}", operand_name(c), operator_name(c), c.right_operand.to_string());
    }

    auto is_ordering(Operator op) -> bool
    {
        return op == Operator::Lt || op == Operator::Lteq || op == Operator::Gt || op == Operator::Gteq;
    }

    // Why a constraint cannot be evaluated, if it cannot.
    auto unsupported_reason(const Constraint& c) -> std::optional<std::string>
    {
        if (c.left_operand == LeftOperand::Unknown)
            return "unknown left operand";
        if (c.op == Operator::Unknown)
            return "unknown operator";
        if (c.left_operand == LeftOperand::Spatial)
        {
            if (c.op != Operator::Eq && c.op != Operator::Neq)
                return "operator/operand mismatch";
            if (!c.right_operand.is_literal() || c.right_operand.datatype() != vocab::xsd::string)
                return "spatial operand must be a plain string";
            return std::nullopt;
        }
        if (!is_ordering(c.op))
            return "operator/operand mismatch";
        if (!c.right_operand.is_literal() || c.right_operand.datatype() != vocab::xsd::dateTime)
            return "dateTime operand must be an xsd:dateTime literal";
        if (!rdf::parse_datetime(c.right_operand.value()))
            return "dateTime operand is not a valid xsd:dateTime";
        return std::nullopt;
    }

    auto holds(const Constraint& c, const UsageContext& ctx) -> bool
    {
        if (c.left_operand == LeftOperand::Spatial)
        {
            auto const equal = ctx.country == c.right_operand.value();
            return c.op == Operator::Eq ? equal : !equal;
        }
        auto const bound = *rdf::parse_datetime(c.right_operand.value());
        switch (c.op)
        {
            case Operator::Lt: return ctx.timestamp < bound;
            case Operator::Lteq: return ctx.timestamp <= bound;
            case Operator::Gt: return ctx.timestamp > bound;
            case Operator::Gteq: return ctx.timestamp >= bound;
            default: return false;
        }
    }

    class PolicyReader
    {
      public:
        explicit PolicyReader(const rdf::Graph& g): _g(g) {}

        auto run() -> Policy
        {
            auto const type = iri(vocab::rdf::type);
            auto subjects = std::set<Term> {};
            for (auto const cls: { vo::Policy, vo::Set, vo::Offer, vo::Agreement })
            {
                for (const auto& s: _g.subjects(type, iri(cls)))
                    subjects.insert(s);
            }
            if (subjects.empty())
                throw NoPolicyFound();
            if (subjects.size() > 1)
                throw MultiplePolicies(subjects.size());
            auto const& subject = *subjects.begin();
            if (!subject.is_iri())
                throw MalformedPolicy("the policy must be identified by an IRI, not a blank node");

            auto policy = Policy {};
            policy.iri = subject.value();
            if (_g.has_type(subject, iri(vo::Agreement)))
                policy.kind = PolicyKind::Agreement;
            else if (_g.has_type(subject, iri(vo::Offer)))
                policy.kind = PolicyKind::Offer;

            auto const inherited = iris(subject, vo::target, "policy");
            for (auto const rule: { vo::prohibition, vo::obligation })
            {
                if (!_g.objects(subject, iri(rule)).empty())
                    _warnings.push_back(fmt::format("policy has an odrl:{} rule, which is not evaluated",
                                                    rule.substr(vo::ns.size())));
            }
            for (const auto& node: _g.objects(subject, iri(vo::permission)))
                read_permission(node, inherited, policy.permissions);
            std::ranges::stable_sort(policy.permissions, [](const Permission& a, const Permission& b) {
                auto key = [](const Permission& p) {
                    auto k = std::vector<std::string> { p.target, p.action };
                    for (const auto& c: p.constraints)
                        k.push_back(describe(c));
                    return k;
                };
                return key(a) < key(b);
            });

            policy.warnings = std::move(_warnings);
            return policy;
        }

      private:
        const rdf::Graph& _g;
        std::vector<std::string> _warnings;

        auto iris(const Term& s, std::string_view predicate, std::string_view what) const -> std::vector<std::string>
        {
            auto out = std::vector<std::string> {};
            for (const auto& o: _g.objects(s, iri(predicate)))
            {
                if (!o.is_iri())
                    throw MalformedPermission(fmt::format("{} odrl:{} must be an IRI, got {}", what,
                                                          predicate.substr(vo::ns.size()), o.to_string()));
                out.push_back(o.value());
            }
            return out;
        }

        auto one(const Term& node, std::string_view predicate) const -> Term
        {
            auto const values = _g.objects(node, iri(predicate));
            if (values.size() != 1)
                throw MalformedPermission(fmt::format("constraint must have exactly one odrl:{}, found {}",
                                                      predicate.substr(vo::ns.size()), values.size()));
            return values.front();
        }

        auto read_constraint(const Term& node) -> Constraint
        {
            if (node.is_literal())
                throw MalformedPermission("odrl:constraint value must be a node, got a literal");
            auto c = Constraint {};
            auto const left = one(node, vo::leftOperand);
            auto const op = one(node, vo::operator_);
            if (!left.is_iri() || !op.is_iri())
                throw MalformedPermission("constraint operand and operator must be IRIs");
            c.left_operand_iri = left.value();
            c.left_operand = left_operand_of(c.left_operand_iri);
            c.operator_iri = op.value();
            c.op = operator_of(c.operator_iri);
            c.right_operand = one(node, vo::rightOperand);
            if (c.left_operand == LeftOperand::Unknown)
                _warnings.push_back(fmt::format("unknown left operand <{}>; requests under it are denied", c.left_operand_iri));
            if (c.op == Operator::Unknown)
                _warnings.push_back(fmt::format("unknown operator <{}>; requests under it are denied", c.operator_iri));
            return c;
        }

        void read_permission(const Term& node, const std::vector<std::string>& inherited, std::vector<Permission>& out)
        {
            if (node.is_literal())
                throw MalformedPermission("odrl:permission value must be a node, got a literal");
            auto targets = iris(node, vo::target, "permission");
            if (targets.empty())
                targets = inherited;
            if (targets.empty())
                throw MalformedPermission("permission is missing odrl:target");
            auto const actions = iris(node, vo::action, "permission");
            if (actions.empty())
                throw MalformedPermission("permission is missing odrl:action");
            if (!_g.objects(node, iri(vo::duty)).empty())
                _warnings.push_back("permission carries an odrl:duty, which is not evaluated");

            auto constraints = std::vector<Constraint> {};
            for (const auto& c: _g.objects(node, iri(vo::constraint)))
                constraints.push_back(read_constraint(c));
            std::ranges::sort(constraints, [](const Constraint& a, const Constraint& b) {
                return std::tie(a.left_operand_iri, a.operator_iri, a.right_operand)
                       < std::tie(b.left_operand_iri, b.operator_iri, b.right_operand);
            });
            for (const auto& t: targets)
            {
                for (const auto& a: actions)
                    out.push_back(Permission { t, a, constraints });
            }
        }
    };

} // namespace

auto make_usage_context(std::string country, std::string_view timestamp, std::string action,
                        std::optional<std::string> target) -> UsageContext
{
    if (!is_country_code(country))
        throw InvalidUsageContext(fmt::format("country must be two uppercase letters, got '{}'", country));
    auto const instant = rdf::parse_datetime(timestamp);
    if (!instant)
        throw InvalidUsageContext(fmt::format("'{}' is not a valid xsd:dateTime", timestamp));
    if (action.empty())
        throw InvalidUsageContext("action must not be empty");
    if (!rdf::has_scheme(action))
        action = std::string(vo::ns) + action;
    return UsageContext { std::move(country), *instant, std::move(action), std::move(target) };
}

auto parse_policy(const rdf::Graph& g) -> Policy
{
    return PolicyReader(g).run();
}

auto evaluate(const Policy& policy, const UsageContext& ctx) -> Decision
{
    auto denied = Decision { Outcome::Deny, {} };
    auto matched = false;
    for (std::size_t i = 0; i < policy.permissions.size(); ++i)
    {
        auto const& p = policy.permissions[i];
        if (p.action != ctx.action || (ctx.target && p.target != *ctx.target))
            continue;
        matched = true;
        auto reasons = std::vector<std::string> {};
        auto all = true;
        for (const auto& c: p.constraints)
        {
            if (auto const why = unsupported_reason(c))
            {
                all = false;
                reasons.push_back(fmt::format("unsupported constraint: {} ({})", describe(c), *why));
                continue;
            }
            auto const ok = holds(c, ctx);
            all = all && ok;
            reasons.push_back(fmt::format("{} constraint {}: {}", to_string(c.left_operand), ok ? "satisfied" : "failed",
                                          describe(c)));
        }
        if (all)
        {
            if (reasons.empty())
                reasons.push_back(fmt::format("permission {} has no constraints", i + 1));
            return Decision { Outcome::Permit, std::move(reasons) };
        }
        for (auto& r: reasons)
            denied.reasons.push_back(std::move(r));
    }
    if (!matched)
        return Decision { Outcome::NotApplicable,
                          { fmt::format("no permission grants <{}>{}", ctx.action,
                                        ctx.target ? fmt::format(" on <{}>", *ctx.target) : std::string {}) } };
    return denied;
}

auto wellformed(const Policy& policy, rdf::Instant now) -> std::vector<Finding>
{
    auto findings = std::vector<Finding> {};
    if (policy.iri.empty() || !rdf::has_scheme(policy.iri))
        findings.push_back(error_finding(fmt::format("policy IRI '{}' is not absolute", policy.iri)));
    if (policy.permissions.empty())
        findings.push_back(error_finding("policy has no permissions"));
    for (std::size_t i = 0; i < policy.permissions.size(); ++i)
    {
        auto const& p = policy.permissions[i];
        auto const n = i + 1;
        if (p.target.empty())
            findings.push_back(error_finding(fmt::format("permission {} has no target", n)));
        else if (!rdf::has_scheme(p.target))
            findings.push_back(error_finding(fmt::format("permission {} target '{}' is not an absolute IRI", n, p.target)));
        if (p.action.empty())
            findings.push_back(error_finding(fmt::format("permission {} has no action", n)));
        for (const auto& c: p.constraints)
        {
            if (c.left_operand == LeftOperand::Unknown)
            {
                findings.push_back(warning_finding(
                    fmt::format("permission {}: unknown left operand <{}> always denies", n, c.left_operand_iri)));
                continue;
            }
            if (c.op == Operator::Unknown)
            {
                findings.push_back(
                    warning_finding(fmt::format("permission {}: unknown operator <{}> always denies", n, c.operator_iri)));
                continue;
            }
            if (auto const why = unsupported_reason(c))
            {
                findings.push_back(error_finding(fmt::format("permission {}: {} in constraint {}", n, *why, describe(c))));
                continue;
            }
            if (c.left_operand == LeftOperand::Spatial && !is_country_code(c.right_operand.value()))
                findings.push_back(warning_finding(fmt::format(
                    "permission {}: spatial operand \"{}\" is not an ISO 3166-1 alpha-2 code", n, c.right_operand.value())));
            if (c.left_operand == LeftOperand::DateTime && (c.op == Operator::Lt || c.op == Operator::Lteq)
                && *rdf::parse_datetime(c.right_operand.value()) < now)
                findings.push_back(warning_finding(fmt::format("permission {}: deadline {} is in the past", n,
                                                               c.right_operand.value())));
        }
    }
    for (const auto& w: policy.warnings)
        findings.push_back(warning_finding(w));
    return findings;
}

auto policy_to_graph(const Policy& policy) -> rdf::Graph
{
    auto g = rdf::Graph {};
    g.set_prefix("odrl", std::string(vo::ns));
    g.set_prefix("xsd", std::string(vocab::xsd::ns));
    auto const subject = Term::iri(policy.iri);
    auto const kind = policy.kind == PolicyKind::Agreement ? vo::Agreement
                      : policy.kind == PolicyKind::Offer   ? vo::Offer
                                                           : vo::Set;
    g.insert(subject, iri(vocab::rdf::type), iri(kind));
    for (std::size_t i = 0; i < policy.permissions.size(); ++i)
    {
        auto const& p = policy.permissions[i];
        auto const node = Term::blank(fmt::format("permission{}", i));
        g.insert(subject, iri(vo::permission), node);
        g.insert(node, iri(vo::target), Term::iri(p.target));
        g.insert(node, iri(vo::action), Term::iri(p.action));
        for (std::size_t k = 0; k < p.constraints.size(); ++k)
        {
            auto const& c = p.constraints[k];
            auto const cn = Term::blank(fmt::format("permission{}constraint{}", i, k));
            g.insert(node, iri(vo::constraint), cn);
            g.insert(cn, iri(vo::leftOperand), Term::iri(c.left_operand_iri));
            g.insert(cn, iri(vo::operator_), Term::iri(c.operator_iri));
            g.insert(cn, iri(vo::rightOperand), c.right_operand);
        }
    }
    return g;
}

} // namespace fairds::odrl
