// SPDX-License-Identifier: Apache-2.0
#include "test_support.hpp"

#include <fairds/rdf/turtle.hpp>
#include <fairds/rdf/vocab.hpp>
#include <fairds/shacl/delta.hpp>
#include <fairds/shacl/diagram.hpp>
#include <fairds/shacl/validate.hpp>

#include <fmt/format.h>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>

#include <set>
#include <tuple>

using namespace fairds;
using namespace fairds::shacl;
using fairds::rdf::Term;
using fairds::testing::load_fixture_graph;

namespace
{

auto iri(std::string_view s)
{
    return Term::iri(std::string(s));
}

auto gndo(std::string_view local)
{
    return std::string(vocab::gndo::ns) + std::string(local);
}

auto shapes(const std::string& name)
{
    return parse_shapes(load_fixture_graph("shapes/" + name + ".ttl"));
}

auto count_lines(const std::string& text, std::string_view needle)
{
    auto n = 0;
    auto pos = std::size_t { 0 };
    while ((pos = text.find(needle, pos)) != std::string::npos)
    {
        ++n;
        pos += needle.size();
    }
    return n;
}

using Key = std::tuple<Term, std::string, ConstraintKind>;

auto keys(const ValidationReport& report)
{
    auto out = std::set<Key> {};
    for (const auto& v: report.violations)
        out.emplace(v.focus_node, v.path, v.constraint);
    return out;
}

} // namespace

TEST(ParseShapes, BaseShapesHaveTwoShapes)
{
    auto const set = shapes("base");
    ASSERT_EQ(set.shapes.size(), 2u);
    for (const auto& s: set.shapes)
    {
        EXPECT_EQ(s.target_class, std::string(vocab::dcat::Dataset));
        ASSERT_EQ(s.properties.size(), 1u);
        EXPECT_EQ(s.properties.front().min_count, std::size_t { 1 });
    }
    EXPECT_TRUE(set.warnings.empty());
}

TEST(ParseShapes, EmptyGraph)
{
    EXPECT_TRUE(parse_shapes(rdf::Graph {}).shapes.empty());
}

TEST(ParseShapes, MissingPathIsMalformed)
{
    auto const g = rdf::parse_turtle(
        "@prefix sh: <http://www.w3.org/ns/shacl#> . <http://e/S> a sh:NodeShape ; sh:property [ sh:minCount 1 ] .");
    try
    {
        (void) parse_shapes(g);
        FAIL();
    }
    catch (const MalformedShape& e)
    {
        EXPECT_NE(std::string(e.what()).find("sh:path"), std::string::npos);
        EXPECT_EQ(e.code(), "malformed_shape");
    }
}

TEST(ParseShapes, OtherMalformedInputs)
{
    auto const prefix = std::string("@prefix sh: <http://www.w3.org/ns/shacl#> . <http://e/S> a sh:NodeShape ; ");
    for (const auto* body: { "sh:property [ sh:path <http://p> ; sh:minCount 2 ; sh:maxCount 1 ] .",
                             "sh:property [ sh:path <http://p> ; sh:minCount -1 ] .",
                             "sh:property [ sh:path <http://p> ; sh:minCount \"one\" ] .",
                             "sh:property [ sh:path \"p\" ] .",
                             "sh:property [ sh:path <http://p> , <http://q> ] .",
                             "sh:property [ sh:path <http://p> ; sh:datatype \"x\" ] .",
                             "sh:targetClass \"C\" .",
                             "sh:property \"x\" ." })
        EXPECT_THROW((void) parse_shapes(rdf::parse_turtle(prefix + body)), MalformedShape) << body;
}

TEST(ParseShapes, NodeCyclesAreRejected)
{
    auto const g = rdf::parse_turtle(R"(@prefix sh: <http://www.w3.org/ns/shacl#> .
        <http://e/A> a sh:NodeShape ; sh:property [ sh:path <http://p> ; sh:node <http://e/B> ] .
        <http://e/B> a sh:NodeShape ; sh:property [ sh:path <http://p> ; sh:node <http://e/A> ] .)");
    EXPECT_THROW((void) parse_shapes(g), CyclicNodeReference);
}

TEST(ParseShapes, DepthLimit)
{
    auto chain = [](int length) {
        auto text = std::string("@prefix sh: <http://www.w3.org/ns/shacl#> .\n");
        for (int i = 0; i < length; ++i)
        {
            text += fmt::format("<http://e/S{}> a sh:NodeShape ; sh:property [ sh:path <http://p> ", i);
            if (i + 1 < length)
                text += fmt::format("; sh:node <http://e/S{}> ", i + 1);
            text += "] .\n";
        }
        return rdf::parse_turtle(text);
    };
    EXPECT_EQ(parse_shapes(chain(16)).shapes.size(), 16u);
    EXPECT_THROW((void) parse_shapes(chain(17)), CyclicNodeReference);
}

TEST(ParseShapes, UnsupportedComponentsBecomeWarnings)
{
    auto const set = shapes("extended_faulty");
    ASSERT_EQ(set.warnings.size(), 1u);
    EXPECT_NE(set.warnings.front().find("sh:or"), std::string::npos);
    auto const findings = check_shapes(set);
    EXPECT_FALSE(has_errors(findings));
    EXPECT_FALSE(findings.empty());
}

TEST(ParseShapes, CorrectedShapesModel)
{
    auto const set = shapes("extended_corrected");
    ASSERT_EQ(set.shapes.size(), 3u);
    auto const* dataset = set.find(iri("http://example.org/DatasetShape"));
    ASSERT_NE(dataset, nullptr);
    ASSERT_EQ(dataset->properties.size(), 3u);
    auto const& artist = dataset->properties[2];
    EXPECT_EQ(artist.path, gndo("firstArtist"));
    EXPECT_EQ(artist.node, iri("http://example.org/PersonShape"));
    EXPECT_EQ(artist.class_, gndo("DifferentiatedPerson"));
    EXPECT_TRUE(check_shapes(set).empty());
}

TEST(CheckShapes, ContradictionsAndDanglingReferences)
{
    auto const set = parse_shapes(rdf::parse_turtle(R"(@prefix sh: <http://www.w3.org/ns/shacl#> .
        <http://e/A> a sh:NodeShape ; sh:property [ sh:path <http://p> ; sh:datatype <http://www.w3.org/2001/XMLSchema#string> ;
            sh:class <http://e/C> ] ;
          sh:property [ sh:path <http://q> ; sh:node <http://e/Missing> ] .)"));
    auto const findings = check_shapes(set);
    EXPECT_EQ(std::ranges::count(findings, Severity::Error, &Finding::severity), 2);
}

TEST(Validate, InstanceConformsToCorrectedShapes)
{
    auto const report = validate(load_fixture_graph("instance.ttl"), shapes("extended_corrected"));
    EXPECT_TRUE(report.conforms);
    EXPECT_TRUE(report.violations.empty());
}

TEST(Validate, MissingTitleGivesOneMinCount)
{
    auto data = load_fixture_graph("instance.ttl");
    for (const auto& t: rdf::Graph(data))
    {
        if (t.predicate.value() == vocab::dcterms::title)
            data.erase(t);
    }
    auto const report = validate(data, shapes("extended_corrected"));
    ASSERT_EQ(report.violations.size(), 1u);
    EXPECT_EQ(report.violations[0].constraint, ConstraintKind::MinCount);
    EXPECT_EQ(report.violations[0].path, vocab::dcterms::title);
    EXPECT_FALSE(report.conforms);
}

TEST(Validate, StringTypedProductionDateGivesDatatypeViolation)
{
    auto data = load_fixture_graph("instance.ttl");
    for (const auto& t: rdf::Graph(data))
    {
        if (t.predicate.value() == gndo("dateOfProduction"))
        {
            data.erase(t);
            data.insert(t.subject, t.predicate, Term::literal(t.object.value()));
        }
    }
    auto const report = validate(data, shapes("extended_corrected"));
    ASSERT_EQ(report.violations.size(), 1u);
    EXPECT_EQ(report.violations[0].constraint, ConstraintKind::Datatype);
    EXPECT_NE(report.violations[0].message.find("xsd:dateTime"), std::string::npos);
}

TEST(Validate, IriWhereLiteralBelongsIsDatatypeViolation)
{
    auto const set = shapes("extended_corrected");
    auto data = load_fixture_graph("instance.ttl");
    for (const auto& t: rdf::Graph(data))
    {
        if (t.predicate.value() == gndo("dateOfProduction"))
        {
            data.erase(t);
            data.insert(t.subject, t.predicate, iri("http://example.org/1818"));
        }
    }
    auto const report = validate(data, set);
    ASSERT_EQ(report.violations.size(), 1u);
    EXPECT_EQ(report.violations[0].constraint, ConstraintKind::Datatype);
}

TEST(Validate, InvalidLexicalFormAndCardinality)
{
    auto const set = shapes("extended_corrected");
    auto data = load_fixture_graph("instance.ttl");
    auto const dataset = iri("http://example.org/DerWandererÜberDemNebelmeer");
    data.insert(dataset, iri(gndo("dateOfProduction")), Term::typed_literal("1818", std::string(vocab::xsd::dateTime)));
    auto const report = validate(data, set);
    auto const found = keys(report);
    EXPECT_TRUE(found.contains(Key { dataset, gndo("dateOfProduction"), ConstraintKind::MaxCount }));
    EXPECT_TRUE(found.contains(Key { dataset, gndo("dateOfProduction"), ConstraintKind::Datatype }));
    EXPECT_EQ(report.violations.size(), 2u);
}

TEST(Validate, ClassAndNodeKind)
{
    auto const set = shapes("extended_corrected");
    auto data = load_fixture_graph("instance.ttl");
    auto const dataset = iri("http://example.org/DerWandererÜberDemNebelmeer");
    for (const auto& t: rdf::Graph(data))
    {
        if (t.predicate.value() == vocab::odrl::hasPolicy)
        {
            data.erase(t);
            data.insert(t.subject, t.predicate, Term::literal("policy 12345"));
        }
        if (t.predicate.value() == vocab::rdf::type && t.object.value() == gndo("DifferentiatedPerson"))
            data.erase(t);
    }
    auto const found = keys(validate(data, set));
    EXPECT_TRUE(found.contains(Key { dataset, std::string(vocab::odrl::hasPolicy), ConstraintKind::NodeKind }));
    EXPECT_TRUE(found.contains(Key { dataset, gndo("firstArtist"), ConstraintKind::Class }));
    EXPECT_EQ(found.size(), 2u);
}

// Independent oracle for deleting every triple of one path: a MinCount
// violation for each focus node that held the path under a shape requiring
// it, plus a Node violation at every node that reaches such a focus through
// an sh:node reference.
TEST(Validate, RemovePathMatchesOracle)
{
    auto const set = shapes("extended_corrected");
    auto const original = load_fixture_graph("instance.ttl");
    auto tested = 0;
    for (const auto& shape: set.shapes)
    {
        for (const auto& p: shape.properties)
        {
            if (p.min_count.value_or(0) == 0)
                continue;
            auto data = original;
            auto holders = std::set<Term> {};
            for (const auto& t: original)
            {
                if (t.predicate.value() == p.path)
                {
                    data.erase(t);
                    holders.insert(t.subject);
                }
            }
            auto expected = std::set<Key> {};
            for (const auto& focus: holders)
            {
                for (const auto& s: set.shapes)
                {
                    auto const requires_path = std::ranges::any_of(
                        s.properties, [&](const PropertyConstraint& q) { return q.path == p.path && q.min_count.value_or(0) > 0; });
                    auto const targeted = s.target_class && original.has_type(focus, Term::iri(*s.target_class));
                    if (requires_path && targeted)
                        expected.emplace(focus, p.path, ConstraintKind::MinCount);
                }
                for (const auto& t: original)
                {
                    if (t.object != focus)
                        continue;
                    for (const auto& s: set.shapes)
                    {
                        for (const auto& q: s.properties)
                        {
                            if (q.path == t.predicate.value() && q.node == shape.id)
                                expected.emplace(t.subject, q.path, ConstraintKind::Node);
                        }
                    }
                }
            }
            auto const report = validate(data, set);
            EXPECT_EQ(keys(report), expected) << p.path;
            EXPECT_TRUE(std::ranges::any_of(report.violations, [&](const Violation& v) { return v.path == p.path; }));
            ++tested;
        }
    }
    EXPECT_EQ(tested, 5);
}

TEST(Validate, UnrelatedTriplesKeepConformance)
{
    auto const set = shapes("extended_corrected");
    auto const base = load_fixture_graph("instance.ttl");
    auto rng = std::mt19937_64(5);
    for (int i = 0; i < 100; ++i)
    {
        auto data = base;
        auto noise = fairds::testing::random_graph(rng, 10, 3);
        for (const auto& t: noise)
        {
            // keep clear of focus nodes and of the typing that creates new ones
            if (t.predicate.value() == vocab::rdf::type)
                continue;
            auto const subject = t.subject.is_blank() ? Term::blank("noise-" + t.subject.value()) : t.subject;
            auto const object = t.object.is_blank() ? Term::blank("noise-" + t.object.value()) : t.object;
            data.insert(subject, t.predicate, object);
        }
        ASSERT_TRUE(validate(data, set).conforms);
    }
}

TEST(Validate, Deterministic)
{
    auto const set = shapes("extended_faulty");
    auto const data = load_fixture_graph("instance.ttl");
    auto const a = validate(data, set);
    auto const b = validate(data, set);
    EXPECT_EQ(a.violations, b.violations);
    EXPECT_TRUE(std::ranges::is_sorted(a.violations, [](const Violation& x, const Violation& y) {
        return std::tie(x.focus_node, x.path) < std::tie(y.focus_node, y.path);
    }));
    // The faulty shapes demand a preferred name the instance never states.
    EXPECT_FALSE(a.conforms);
}

TEST(ShapeDelta, IdenticalSetsHaveEmptyDelta)
{
    auto const set = shapes("extended_corrected");
    EXPECT_TRUE(shape_delta(set, set).empty());
}

TEST(ShapeDelta, BaseToCorrected)
{
    auto const delta = shape_delta(shapes("base"), shapes("extended_corrected"));
    EXPECT_TRUE(delta.removed.empty());
    EXPECT_TRUE(delta.removed_shapes.empty());
    EXPECT_TRUE(delta.changed.empty());
    EXPECT_EQ(delta.added_shapes, std::vector<std::string> { "http://example.org/PersonShape" });
    auto added = std::set<std::pair<std::string, std::string>> {};
    for (const auto& a: delta.added)
        added.emplace(a.shape, a.constraint.path);
    EXPECT_EQ(added, (std::set<std::pair<std::string, std::string>> {
                         { "http://example.org/DatasetShape", gndo("firstArtist") },
                         { "http://example.org/DatasetShape", gndo("dateOfProduction") },
                         { "http://example.org/PersonShape", gndo("gndIdentifier") },
                     }));
    for (const auto& a: delta.added)
    {
        if (a.constraint.path == gndo("firstArtist"))
        {
            EXPECT_EQ(a.constraint.node, iri("http://example.org/PersonShape"));
        }
        if (a.constraint.path == gndo("dateOfProduction"))
        {
            EXPECT_EQ(a.constraint.datatype, std::string(vocab::xsd::dateTime));
        }
    }
}

TEST(ShapeDelta, FaultyToCorrected)
{
    auto const before = shapes("extended_faulty");
    auto const after = shapes("extended_corrected");
    auto const delta = shape_delta(before, after);
    ASSERT_EQ(delta.removed.size(), 1u);
    EXPECT_EQ(delta.removed[0].constraint.path, gndo("preferredNameForThePerson"));
    ASSERT_EQ(delta.changed.size(), 1u);
    EXPECT_EQ(delta.changed[0].before.path, gndo("dateOfProduction"));
    EXPECT_FALSE(delta.changed[0].before.datatype);
    EXPECT_EQ(delta.changed[0].after.datatype, std::string(vocab::xsd::dateTime));
    EXPECT_TRUE(delta.added.empty());
    auto const json = to_json(delta, before, after);
    EXPECT_EQ(json["removed"][0]["constraint"]["path"], "gndo:preferredNameForThePerson");
    EXPECT_EQ(json["changed"][0]["after"]["datatype"], "xsd:dateTime");
}

TEST(ShapeDelta, EmptyIffStructurallyEqualUnderReserialization)
{
    for (const auto* name: { "base", "extended_faulty", "extended_corrected" })
    {
        auto const set = shapes(name);
        auto const again = parse_shapes(rdf::parse_turtle(rdf::serialize_turtle(set.source)));
        EXPECT_TRUE(shape_delta(set, again).empty()) << name;
        EXPECT_EQ(export_diagram(set), export_diagram(again));
    }
    EXPECT_FALSE(shape_delta(shapes("base"), shapes("extended_faulty")).empty());
}

TEST(Diagram, EmptySet)
{
    EXPECT_EQ(export_diagram(ShapeSet {}), "@startuml\nhide empty methods\n@enduml\n");
}

TEST(Diagram, StructuralOracle)
{
    for (const auto* name: { "base", "extended_corrected" })
    {
        auto const set = shapes(name);
        auto const text = export_diagram(set);
        auto node_refs = 0;
        for (const auto& t: set.source)
            node_refs += t.predicate.value() == vocab::sh::node ? 1 : 0;
        EXPECT_EQ(count_lines(text, "\nclass "), static_cast<int>(set.shapes.size())) << text;
        EXPECT_EQ(count_lines(text, " --> "), node_refs) << text;
    }
    auto const text = export_diagram(shapes("extended_corrected"));
    EXPECT_NE(text.find(": firstArtist\n"), std::string::npos) << text;
    EXPECT_NE(text.find("class \"ex:PersonShape\""), std::string::npos);
    EXPECT_NE(text.find("gndo:dateOfProduction : xsd:dateTime [1..1]"), std::string::npos);
}
