// SPDX-License-Identifier: Apache-2.0
#include <fairds/odrl/policy.hpp>
#include <fairds/pipeline/validators.hpp>
#include <fairds/rdf/isomorphism.hpp>
#include <fairds/rdf/vocab.hpp>
#include <fairds/shacl/validate.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <set>

namespace fairds::pipeline
{

using rdf::Term;

auto display_prefixes(const rdf::Graph& graph) -> rdf::PrefixMap
{
    auto prefixes = rdf::PrefixMap {
        { "sh", std::string(vocab::sh::ns) },       { "xsd", std::string(vocab::xsd::ns) },
        { "rdf", std::string(vocab::rdf::ns) },     { "rdfs", std::string(vocab::rdfs::ns) },
        { "odrl", std::string(vocab::odrl::ns) },   { "gndo", std::string(vocab::gndo::ns) },
        { "dcterms", "http://purl.org/dc/terms/" }, { "dcat", "http://www.w3.org/ns/dcat#" },
    };
    for (const auto& [label, ns]: graph.prefixes())
        prefixes.insert_or_assign(label, ns);
    return prefixes;
}

auto run_validators(const std::vector<Validator>& validators, const rdf::Graph& graph) -> std::vector<Finding>
{
    auto findings = std::vector<Finding> {};
    for (const auto& v: validators)
    {
        try
        {
            auto f = v.check(graph);
            findings.insert(findings.end(), std::make_move_iterator(f.begin()), std::make_move_iterator(f.end()));
        }
        catch (const std::exception& e)
        {
            findings.push_back(error_finding(fmt::format("{}: {}", v.name, e.what())));
        }
    }
    return findings;
}

auto shape_wellformed_validator() -> Validator
{
    return { "shape_wellformed", [](const rdf::Graph& g) {
                auto findings = std::vector<Finding> {};
                try
                {
                    auto const shapes = shacl::parse_shapes(g);
                    if (shapes.shapes.empty())
                        findings.push_back(error_finding("the graph defines no SHACL node shapes"));
                    auto checked = shacl::check_shapes(shapes);
                    findings.insert(findings.end(), checked.begin(), checked.end());
                }
                catch (const Error& e)
                {
                    findings.push_back(error_finding(e.what()));
                }
                return findings;
            } };
}

auto monotonicity_validator(rdf::Graph base) -> Validator
{
    return { "monotonicity", [base = std::move(base)](const rdf::Graph& g) {
                auto findings = std::vector<Finding> {};
                auto const result = rdf::graph_subsumes(base, g);
                if (result.subsumed)
                    return findings;
                auto const prefixes = display_prefixes(base);
                for (const auto& t: result.witness.removed)
                {
                    findings.push_back(error_finding(fmt::format(
                        "the existing shapes must be preserved; missing triple: {} {} {}", rdf::to_display(t.subject, prefixes),
                        rdf::to_display(t.predicate, prefixes), rdf::to_display(t.object, prefixes))));
                }
                return findings;
            } };
}

namespace
{

    auto constrained_paths(const shacl::ShapeSet& shapes) -> std::set<std::string>
    {
        auto paths = std::set<std::string> {};
        for (const auto& s: shapes.shapes)
        {
            for (const auto& p: s.properties)
                paths.insert(p.path);
        }
        return paths;
    }

} // namespace

auto requirements_validator(SchemaRequirements requirements, rdf::Graph base) -> Validator
{
    auto base_paths = constrained_paths(shacl::parse_shapes(base));
    return { "requirements",
             [requirements = std::move(requirements), base_paths = std::move(base_paths)](const rdf::Graph& g) {
                 auto findings = std::vector<Finding> {};
                 auto const shapes = shacl::parse_shapes(g);
                 auto const prefixes = display_prefixes(g);
                 auto show = [&](const std::string& iri) { return rdf::to_display(Term::iri(iri), prefixes); };

                 for (const auto& req: requirements.required)
                 {
                     auto matching = std::vector<const shacl::PropertyConstraint*> {};
                     for (const auto& s: shapes.shapes)
                     {
                         for (const auto& p: s.properties)
                         {
                             if (p.path == req.path)
                                 matching.push_back(&p);
                         }
                     }
                     if (matching.empty())
                     {
                         findings.push_back(error_finding(fmt::format("a property constraint on {} is required", show(req.path))));
                         continue;
                     }
                     for (const auto* p: matching)
                     {
                         if (req.datatype && (p->datatype != req.datatype || !p->unsupported.empty()))
                         {
                             auto detail = std::string {};
                             if (!p->unsupported.empty())
                                 detail = fmt::format(" (found alternatives via {})", show(p->unsupported.front()));
                             else if (p->datatype)
                                 detail = fmt::format(" (found {})", show(*p->datatype));
                             findings.push_back(error_finding(fmt::format("{} must have exactly the datatype {}{}",
                                                                          show(req.path), show(*req.datatype), detail)));
                         }
                         if (req.class_ && p->class_ != req.class_)
                             findings.push_back(error_finding(
                                 fmt::format("{} must have sh:class {}", show(req.path), show(*req.class_))));
                     }
                 }
                 if (requirements.closed)
                 {
                     auto allowed = base_paths;
                     for (const auto& req: requirements.required)
                         allowed.insert(req.path);
                     for (const auto& path: constrained_paths(shapes))
                     {
                         if (!allowed.contains(path))
                             findings.push_back(error_finding(
                                 fmt::format("{} was not requested; remove its property constraint", show(path))));
                     }
                 }
                 return findings;
             } };
}

auto conformance_validator(shacl::ShapeSet shapes) -> Validator
{
    return { "shacl_conformance", [shapes = std::move(shapes)](const rdf::Graph& g) {
                auto findings = std::vector<Finding> {};
                auto const prefixes = display_prefixes(g);
                auto focused = false;
                for (const auto& s: shapes.shapes)
                {
                    if (s.target_class && !g.subjects(Term::iri(std::string(vocab::rdf::type)), Term::iri(*s.target_class)).empty())
                        focused = true;
                }
                if (!focused)
                    findings.push_back(error_finding("the instance contains no node of a class targeted by the shapes"));
                auto const report = shacl::validate(g, shapes);
                for (const auto& v: report.violations)
                    findings.push_back(error_finding(shacl::describe(v, prefixes)));
                return findings;
            } };
}

auto verified_pid_validator(std::function<std::map<std::string, std::string>()> known) -> Validator
{
    return { "verified_pid", [known = std::move(known)](const rdf::Graph& g) {
                auto findings = std::vector<Finding> {};
                auto const returned = known();
                auto const predicate = Term::iri(std::string(vocab::gndo::gndIdentifier));
                auto seen = std::set<std::string> {};
                for (const auto& t: g)
                {
                    if (t.predicate != predicate || !t.object.is_literal() || !seen.insert(t.object.value()).second)
                        continue;
                    if (!returned.contains(t.object.value()))
                        findings.push_back(error_finding(fmt::format(
                            "gndo:gndIdentifier \"{}\" was not returned by the lookup tool in this session; "
                            "call lookup_gnd_id instead of guessing identifiers",
                            t.object.value())));
                }
                return findings;
            } };
}

auto policy_validator(std::string expected_iri, rdf::Instant now) -> Validator
{
    return { "policy", [expected_iri = std::move(expected_iri), now](const rdf::Graph& g) {
                auto findings = std::vector<Finding> {};
                auto policy = odrl::Policy {};
                try
                {
                    policy = odrl::parse_policy(g);
                }
                catch (const Error& e)
                {
                    findings.push_back(error_finding(e.what()));
                    return findings;
                }
                auto checked = odrl::wellformed(policy, now);
                findings.insert(findings.end(), checked.begin(), checked.end());
                for (const auto& w: policy.warnings)
                    findings.push_back(warning_finding(w));
                if (policy.iri != expected_iri)
                    findings.push_back(error_finding(fmt::format("policy IRI must be <{}>, found <{}>", expected_iri, policy.iri)));
                return findings;
            } };
}

} // namespace fairds::pipeline
