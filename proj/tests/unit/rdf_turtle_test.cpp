// SPDX-License-Identifier: Apache-2.0
#include "test_support.hpp"

#include <fairds/rdf/isomorphism.hpp>
#include <fairds/rdf/turtle.hpp>
#include <fairds/rdf/vocab.hpp>

#include <gtest/gtest.h>

using namespace fairds;
using namespace fairds::rdf;

namespace
{
auto iri(std::string s)
{
    return Term::iri(std::move(s));
}
} // namespace

TEST(TurtleParser, TitleWithGermanLanguageTag)
{
    auto const g = parse_turtle(
        "@prefix dcterms: <http://purl.org/dc/terms/> . "
        "<http://example.org/d> dcterms:title \"Der Wanderer über dem Nebelmeer\"@de .");
    ASSERT_EQ(g.size(), 1u);
    auto const& t = *g.begin();
    EXPECT_EQ(t.subject, iri("http://example.org/d"));
    EXPECT_EQ(t.predicate, iri(std::string(vocab::dcterms::title)));
    EXPECT_TRUE(t.object.is_literal());
    EXPECT_EQ(t.object.value(), "Der Wanderer über dem Nebelmeer");
    EXPECT_EQ(t.object.language(), "de");
    EXPECT_EQ(t.object.datatype(), vocab::rdf::langString);
}

TEST(TurtleParser, EmptyInputGivesEmptyGraph)
{
    EXPECT_TRUE(parse_turtle("").empty());
    EXPECT_TRUE(parse_turtle("  # only a comment\n").empty());
}

TEST(TurtleParser, UnterminatedLiteralIsSyntaxErrorOnLineOne)
{
    try
    {
        (void) parse_turtle("<http://a> <http://b> \"x");
        FAIL() << "expected SyntaxError";
    }
    catch (const SyntaxError& e)
    {
        EXPECT_EQ(e.line(), 1u);
        EXPECT_EQ(e.column(), 23u);
        EXPECT_NE(std::string(e.what()).find("unterminated string literal"), std::string::npos);
        EXPECT_EQ(e.code(), "syntax_error");
    }
}

TEST(TurtleParser, PositionsCountLinesAndCodePoints)
{
    try
    {
        (void) parse_turtle("@prefix ex: <http://example.org/> .\nex:Ü ex:p ex:o ;\n  ex:q ?x .");
        FAIL() << "expected SyntaxError";
    }
    catch (const SyntaxError& e)
    {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), 8u);
    }
}

TEST(TurtleParser, LiteralDefaults)
{
    auto const g = parse_turtle("<http://s> <http://p> \"plain\" , 12 , -1.5 , true , 'single' , \"x\"^^<http://dt> .");
    auto const objects = g.objects(iri("http://s"), iri("http://p"));
    ASSERT_EQ(objects.size(), 6u);
    auto find = [&](std::string_view lexical) {
        for (const auto& o: objects)
            if (o.value() == lexical)
                return o;
        return Term {};
    };
    EXPECT_EQ(find("plain").datatype(), vocab::xsd::string);
    EXPECT_EQ(find("single").datatype(), vocab::xsd::string);
    EXPECT_EQ(find("12").datatype(), vocab::xsd::integer);
    EXPECT_EQ(find("-1.5").datatype(), vocab::xsd::decimal);
    EXPECT_EQ(find("true").datatype(), vocab::xsd::boolean);
    EXPECT_EQ(find("x").datatype(), "http://dt");
}

TEST(TurtleParser, LanguageTagsAreLowercased)
{
    auto const g = parse_turtle("<http://s> <http://p> \"colour\"@EN-GB .");
    EXPECT_EQ(g.begin()->object.language(), "en-gb");
}

TEST(TurtleParser, AbbreviationsAndBlankNodes)
{
    auto const g = parse_turtle(R"(
        @prefix ex: <http://example.org/> .
        ex:s a ex:C ;
             ex:p ex:o1 , ex:o2 ;
             ex:nested [ ex:q "v" ; ] ;
             ex:anon [] .
        _:x ex:p _:x .
        [ ex:r 1 ] .
        [] ex:r 2 .
    )");
    EXPECT_EQ(g.size(), 9u);
    EXPECT_TRUE(g.contains(Triple(iri("http://example.org/s"), iri(std::string(vocab::rdf::type)), iri("http://example.org/C"))));
    EXPECT_EQ(g.blank_nodes().size(), 5u);
}

TEST(TurtleParser, NonAsciiLocalNames)
{
    auto const g = parse_turtle("@prefix ex: <http://example.org/> . ex:DerWandererÜberDemNebelmeer ex:p ex:o .");
    EXPECT_EQ(g.begin()->subject.value(), "http://example.org/DerWandererÜberDemNebelmeer");
}

TEST(TurtleParser, LocalNameEscapesAndTrailingDot)
{
    auto const g = parse_turtle("@prefix ex: <http://example.org/> . ex:a\\,b ex:p ex:c.d.");
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g.begin()->subject.value(), "http://example.org/a,b");
    EXPECT_EQ(g.begin()->object.value(), "http://example.org/c.d");
}

TEST(TurtleParser, StringEscapes)
{
    auto const g = parse_turtle(R"(<http://s> <http://p> "a\tb\n\"c\" Ü \U0001F3A8" .)");
    EXPECT_EQ(g.begin()->object.value(), "a\tb\n\"c\" \xC3\x9C \xF0\x9F\x8E\xA8");
}

TEST(TurtleParser, BaseResolution)
{
    auto const g = parse_turtle("@base <http://example.org/a/b> . <c> <../d> <#frag> .");
    auto const& t = *g.begin();
    EXPECT_EQ(t.subject.value(), "http://example.org/a/c");
    EXPECT_EQ(t.predicate.value(), "http://example.org/d");
    EXPECT_EQ(t.object.value(), "http://example.org/a/b#frag");

    auto const h = parse_turtle("<x> <http://p> <http://o> .", "http://base.example/dir/");
    EXPECT_EQ(h.begin()->subject.value(), "http://base.example/dir/x");
}

TEST(TurtleParser, SparqlStyleDirectives)
{
    auto const g = parse_turtle("PREFIX ex: <http://example.org/>\nBASE <http://b.example/>\nex:s ex:p <o> .");
    EXPECT_EQ(g.begin()->object.value(), "http://b.example/o");
}

TEST(TurtleParser, SchemeAndHostAreCaseNormalized)
{
    auto const g = parse_turtle("<HTTP://Example.ORG/Path> <http://p> <urn:X:Y> .");
    EXPECT_EQ(g.begin()->subject.value(), "http://example.org/Path");
    EXPECT_EQ(g.begin()->object.value(), "urn:X:Y");
}

TEST(TurtleParser, UnresolvedPrefix)
{
    try
    {
        (void) parse_turtle("\n  foo:bar <http://p> <http://o> .");
        FAIL();
    }
    catch (const UnresolvedPrefix& e)
    {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 3u);
        EXPECT_EQ(e.code(), "unresolved_prefix");
    }
}

TEST(TurtleParser, RelativeIriWithoutBase)
{
    EXPECT_THROW((void) parse_turtle("<relative> <http://p> <http://o> ."), RelativeIriWithoutBase);
}

struct RejectedConstruct
{
    const char* text;
    const char* message;
};

class TurtleRejects: public ::testing::TestWithParam<RejectedConstruct>
{
};

TEST_P(TurtleRejects, NamesTheUnsupportedConstruct)
{
    auto const& param = GetParam();
    try
    {
        (void) parse_turtle(param.text);
        FAIL() << "expected SyntaxError for " << param.text;
    }
    catch (const SyntaxError& e)
    {
        EXPECT_NE(std::string(e.what()).find(param.message), std::string::npos) << e.what();
        EXPECT_GE(e.line(), 1u);
        EXPECT_GE(e.column(), 1u);
    }
}

INSTANTIATE_TEST_SUITE_P(
    Subset, TurtleRejects,
    ::testing::Values(RejectedConstruct { "<http://s> <http://p> ( 1 2 ) .", "collections" },
                      RejectedConstruct { "<http://s> <http://p> 1.5e3 .", "exponent" },
                      RejectedConstruct { "<http://s> <http://p> \"\"\"long\"\"\" .", "triple-quoted" },
                      RejectedConstruct { "<http://s> <http://p> '''long''' .", "triple-quoted" },
                      RejectedConstruct { "<http://s> <http://p> <http://o>", "'.'" },
                      RejectedConstruct { "\"lit\" <http://p> <http://o> .", "subject" },
                      RejectedConstruct { "<http://s> <http://p> \"a\nb\" .", "line break" },
                      RejectedConstruct { "@foo <http://x> .", "unknown directive" },
                      RejectedConstruct { "<http://s> <http://p> <http://o o> .", "invalid character" },
                      RejectedConstruct { "<http://s> <http://p> [ <http://q> 1 .", "']'" }));

TEST(TurtleParser, EmptyStringLiteralIsNotTripleQuoted)
{
    auto const g = parse_turtle("<http://s> <http://p> \"\" .");
    EXPECT_EQ(g.begin()->object.value(), "");
}

TEST(TurtleParser, DeepNestingIsAnErrorNotACrash)
{
    auto text = std::string("<http://s> <http://p> ");
    for (int i = 0; i < 5000; ++i)
        text += "[ <http://p> ";
    EXPECT_THROW((void) parse_turtle(text), SyntaxError);
}

TEST(TurtleParser, ArbitraryBytesNeverEscapeAsOtherExceptions)
{
    auto rng = std::mt19937_64(20240510);
    auto const seed = std::string(R"(@prefix ex: <http://example.org/> . ex:s a ex:C ; ex:p "v"@de , 1.5 , [ ex:q _:b ] .)");
    constexpr auto alphabet = std::string_view("<>\"'[](),;.:_@^#\\ \n\tabcexpu0123456789\xC3\x9C");
    for (int round = 0; round < 4000; ++round)
    {
        auto text = seed;
        auto const edits = std::uniform_int_distribution<int>(1, 6)(rng);
        for (int e = 0; e < edits; ++e)
        {
            auto const pos = std::uniform_int_distribution<std::size_t>(0, text.size())(rng);
            auto const c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
            switch (std::uniform_int_distribution<int>(0, 2)(rng))
            {
                case 0: text.insert(text.begin() + static_cast<std::ptrdiff_t>(pos), c); break;
                case 1:
                    if (pos < text.size())
                        text.erase(pos, 1);
                    break;
                default:
                    if (pos < text.size())
                        text[pos] = c;
            }
        }
        if (round % 4 == 0)
        {
            text.clear();
            auto const len = std::uniform_int_distribution<std::size_t>(0, 64)(rng);
            for (std::size_t i = 0; i < len; ++i)
                text += static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
        }
        try
        {
            (void) parse_turtle(text);
        }
        catch (const ParseError& e)
        {
            EXPECT_GE(e.line(), 1u);
            EXPECT_GE(e.column(), 1u);
        }
        catch (const std::exception& e)
        {
            ADD_FAILURE() << "unexpected exception " << e.what() << " for input: " << text;
        }
    }
}

TEST(TurtleWriter, EmptyGraph)
{
    EXPECT_EQ(serialize_turtle(Graph {}), "");
    auto g = Graph {};
    g.set_prefix("ex", "http://example.org/");
    EXPECT_EQ(serialize_turtle(g), "@prefix ex: <http://example.org/> .\n");
}

TEST(TurtleWriter, RoundTripsTheTitleExample)
{
    auto const g = parse_turtle(
        "@prefix dcterms: <http://purl.org/dc/terms/> . "
        "<http://example.org/d> dcterms:title \"Der Wanderer über dem Nebelmeer\"@de .");
    auto const text = serialize_turtle(g);
    EXPECT_EQ(text, "@prefix dcterms: <http://purl.org/dc/terms/> .\n\n"
                    "<http://example.org/d> dcterms:title \"Der Wanderer über dem Nebelmeer\"@de .\n");
    EXPECT_EQ(parse_turtle(text), g);
}

TEST(TurtleWriter, InstanceFixtureNestsTheArtistInline)
{
    auto const g = fairds::testing::load_fixture_graph("instance.ttl");
    auto const text = serialize_turtle(g);
    EXPECT_EQ(text, R"(@prefix dcat: <http://www.w3.org/ns/dcat#> .
@prefix dcterms: <http://purl.org/dc/terms/> .
@prefix ex: <http://example.org/> .
@prefix gndo: <https://d-nb.info/standards/elementset/gnd#> .
@prefix odrl: <http://www.w3.org/ns/odrl/2/> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .

ex:DerWandererÜberDemNebelmeer dcterms:title "Der Wanderer über dem Nebelmeer"@de ;
    a dcat:Dataset ;
    odrl:hasPolicy <http://example.org/policy/12345> ;
    gndo:dateOfProduction "1818-01-01T00:00:00"^^xsd:dateTime ;
    gndo:firstArtist [
        a gndo:DifferentiatedPerson ;
        gndo:gndIdentifier "118535889"
    ] .
)");
    EXPECT_TRUE(graph_isomorphic(parse_turtle(text), g));
}

TEST(TurtleWriter, DeterministicAcrossPrefixOrderAndLabels)
{
    auto rng = std::mt19937_64(7);
    auto const g = fairds::testing::load_fixture_graph("shapes/extended_corrected.ttl");
    auto const relabeled = fairds::testing::relabel_blank_nodes(g, rng);
    EXPECT_EQ(serialize_turtle(g), serialize_turtle(g));
    EXPECT_TRUE(graph_isomorphic(parse_turtle(serialize_turtle(relabeled)), g));
}

TEST(TurtleWriter, BlankNodeCyclesAreWrittenWithLabels)
{
    auto g = Graph {};
    g.insert(Term::blank("a"), iri("http://p"), Term::blank("b"));
    g.insert(Term::blank("b"), iri("http://p"), Term::blank("a"));
    g.insert(Term::blank("c"), iri("http://p"), Term::blank("c"));
    auto const text = serialize_turtle(g);
    EXPECT_TRUE(graph_isomorphic(parse_turtle(text), g)) << text;
}

TEST(TurtleWriter, RoundTripPropertyOnRandomGraphs)
{
    auto rng = std::mt19937_64(1818);
    for (int i = 0; i < 300; ++i)
    {
        auto const g = fairds::testing::random_graph(rng);
        auto const text = serialize_turtle(g);
        auto const back = parse_turtle(text);
        ASSERT_TRUE(graph_isomorphic(back, g)) << text;
        EXPECT_EQ(serialize_turtle(g), text);
    }
}

TEST(Graph, InsertionIsIdempotentAndIgnoresPrefixesInEquality)
{
    auto g = Graph {};
    EXPECT_TRUE(g.insert(iri("http://s"), iri("http://p"), Term::literal("o")));
    EXPECT_FALSE(g.insert(iri("http://s"), iri("http://p"), Term::literal("o")));
    EXPECT_EQ(g.size(), 1u);
    auto h = g;
    h.set_prefix("ex", "http://example.org/");
    EXPECT_EQ(g, h);
}

TEST(Graph, TripleInvariants)
{
    EXPECT_THROW(Triple(Term::literal("x"), iri("http://p"), iri("http://o")), std::invalid_argument);
    EXPECT_THROW(Triple(iri("http://s"), Term::blank("p"), iri("http://o")), std::invalid_argument);
}

TEST(Iri, Resolution)
{
    // RFC 3986 section 5.4.1 examples
    auto const base = "http://a/b/c/d;p?q";
    EXPECT_EQ(resolve_iri(base, "g"), "http://a/b/c/g");
    EXPECT_EQ(resolve_iri(base, "./g"), "http://a/b/c/g");
    EXPECT_EQ(resolve_iri(base, "g/"), "http://a/b/c/g/");
    EXPECT_EQ(resolve_iri(base, "/g"), "http://a/g");
    EXPECT_EQ(resolve_iri(base, "//g"), "http://g");
    EXPECT_EQ(resolve_iri(base, "?y"), "http://a/b/c/d;p?y");
    EXPECT_EQ(resolve_iri(base, "#s"), "http://a/b/c/d;p?q#s");
    EXPECT_EQ(resolve_iri(base, ""), "http://a/b/c/d;p?q");
    EXPECT_EQ(resolve_iri(base, ".."), "http://a/b/");
    EXPECT_EQ(resolve_iri(base, "../.."), "http://a/");
    EXPECT_EQ(resolve_iri(base, "../../../g"), "http://a/g");
    EXPECT_EQ(resolve_iri(base, "g;x=1/../y"), "http://a/b/c/y");
}
