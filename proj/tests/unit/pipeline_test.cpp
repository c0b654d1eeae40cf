// SPDX-License-Identifier: Apache-2.0
#include "test_support.hpp"

#include <fairds/llm/scripted.hpp>
#include <fairds/pipeline/scenario.hpp>
#include <fairds/rdf/isomorphism.hpp>
#include <fairds/rdf/turtle.hpp>
#include <fairds/rdf/vocab.hpp>
#include <fairds/shacl/validate.hpp>

#include <gtest/gtest.h>

#include <unistd.h>

#include <atomic>
#include <random>

using namespace fairds;
using namespace fairds::pipeline;
using fairds::testing::fixtures_dir;
using fairds::testing::load_fixture_graph;
using fairds::testing::read_text;
using nlohmann::json;

namespace
{

const auto fixed_now = *rdf::parse_datetime("2024-05-01T12:00:00Z");

auto text_step(std::string pattern, std::string text, bool repeatable = false) -> llm::ScriptStep
{
    return { llm::Matcher { llm::MatchKind::Substring, std::move(pattern) },
             llm::BackendResponse { std::move(text), std::nullopt, {} }, repeatable };
}

auto lookup_step(std::string pattern, std::string name) -> llm::ScriptStep
{
    auto call = llm::ToolCall { "call_1", std::string(pid::lookup_tool_name), json { { "name", name } }.dump() };
    return { llm::Matcher { llm::MatchKind::Substring, std::move(pattern) },
             llm::BackendResponse { std::vector<llm::ToolCall> { call }, std::nullopt, {} }, false };
}

auto fenced(const std::string& turtle) -> std::string
{
    return "Here you go:\n```turtle\n" + turtle + "```\nLet me know if anything is missing.";
}

auto fixture(const std::string& relative) -> std::string
{
    return read_text(fixtures_dir() / relative);
}

auto prompts() -> const PromptTemplates&
{
    static const auto templates = PromptTemplates::load(fairds::testing::assets_dir() / "prompts");
    return templates;
}

/// Backend plus pipeline over SPARQL fixtures with a fixed clock.
struct Harness
{
    explicit Harness(std::vector<llm::ScriptStep> script, int max_retries = 2):
        backend(std::move(script), "test-model"),
        pipeline(backend, prompts(), pid::SparqlEndpointConfig {},
                 std::make_shared<pid::FixtureTransport>(fixtures_dir() / "sparql"),
                 PipelineConfig { max_retries, 4, [] { return fixed_now; } })
    {
    }

    llm::ScriptedBackend backend;
    Pipeline pipeline;
};

auto base_session() -> Session
{
    return make_session("s1", load_fixture_graph("shapes/base.ttl"));
}

const std::string extend_instruction = "please extend the shapes to describe digital versions of paintings";
const std::string correction = "Please do not include the preferred name of the painter";

/// Session with committed corrected shapes, built without the backend.
auto schema_session(Harness& h) -> Session
{
    auto s = base_session();
    h.pipeline.extend_schema(s, extend_instruction);
    return s;
}

auto museum_requirements() -> SchemaRequirements
{
    namespace gndo = vocab::gndo;
    auto const gnd = std::string("https://d-nb.info/standards/elementset/gnd#");
    return { { { gnd + "firstArtist", std::nullopt, gnd + "DifferentiatedPerson" },
               { gnd + "gndIdentifier", std::nullopt, std::nullopt },
               { gnd + "dateOfProduction", std::string(vocab::xsd::dateTime), std::nullopt } },
             true };
}

auto with_retries(int max_retries) -> RepairOptions
{
    auto options = RepairOptions {};
    options.max_retries = max_retries;
    return options;
}

auto contains(const std::string& haystack, const std::string& needle) -> bool
{
    return haystack.find(needle) != std::string::npos;
}

auto any_contains(const std::vector<std::string>& items, const std::string& needle) -> bool
{
    return std::ranges::any_of(items, [&](const std::string& s) { return contains(s, needle); });
}

} // namespace

// extract_code_block

TEST(ExtractCodeBlock, FencedBlockWithSurroundingText)
{
    EXPECT_EQ(extract_code_block("Here are the shapes:\n```turtle\n@prefix sh: <http://www.w3.org/ns/shacl#> .\n```\nExplanation..."),
              "@prefix sh: <http://www.w3.org/ns/shacl#> .");
}

TEST(ExtractCodeBlock, NoFenceReturnsTrimmedText)
{
    EXPECT_EQ(extract_code_block("  \n<a> <b> <c> .\n\t"), "<a> <b> <c> .");
}

TEST(ExtractCodeBlock, FirstOfTwoBlocks)
{
    EXPECT_EQ(extract_code_block("```turtle\nfirst\n```\ntext\n```\nsecond\n```"), "first");
}

TEST(ExtractCodeBlock, BareFenceAndUnclosedFence)
{
    EXPECT_EQ(extract_code_block("```\n<a> <b> <c> .\n```"), "<a> <b> <c> .");
    EXPECT_EQ(extract_code_block("intro\n```turtle\n<a> <b> <c> .\n"), "<a> <b> <c> .");
}

TEST(ExtractCodeBlock, WiderFenceEnclosesNarrowerOne)
{
    EXPECT_EQ(extract_code_block("````\nx\n```\ny\n````"), "x\n```\ny");
}

TEST(ExtractCodeBlock, NeverThrowsOnRandomInput)
{
    auto rng = std::mt19937_64(17);
    auto const alphabet = std::string("`\n turtle<>.\t");
    for (int i = 0; i < 2000; ++i)
    {
        auto text = std::string {};
        auto const n = std::uniform_int_distribution<int>(0, 40)(rng);
        for (int k = 0; k < n; ++k)
            text += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
        EXPECT_NO_THROW((void)extract_code_block(text));
    }
}

// generate_validated

TEST(GenerateValidated, ValidFirstAnswer)
{
    auto backend = llm::ScriptedBackend({ text_step("extend", fenced(fixture("shapes/extended_corrected.ttl"))) });
    auto conv = llm::Conversation { { llm::ChatMessage::user("extend") }, "m" };
    auto const out = generate_validated(conv, { shape_wellformed_validator() }, backend);
    EXPECT_EQ(out.attempts, 1);
    EXPECT_TRUE(out.repair_log.empty());
    EXPECT_TRUE(rdf::graph_isomorphic(out.artifact, load_fixture_graph("shapes/extended_corrected.ttl")));
}

TEST(GenerateValidated, FaultyThenCorrectedConvergesInTwoAttempts)
{
    auto backend = llm::ScriptedBackend({
        text_step("extend", fenced(fixture("shapes/extended_faulty.ttl"))),
        text_step("Please correct the following issues", fixture("shapes/extended_corrected.ttl")),
    });
    auto const base = load_fixture_graph("shapes/base.ttl");
    auto const validators = std::vector<Validator> { shape_wellformed_validator(), monotonicity_validator(base),
                                                     requirements_validator(museum_requirements(), base) };
    auto const out = generate_validated({ { llm::ChatMessage::user("extend") }, "m" }, validators, backend);
    EXPECT_EQ(out.attempts, 2);
    ASSERT_EQ(out.repair_log.size(), 1U);
    auto const& entry = out.repair_log.front();
    EXPECT_TRUE(any_contains(entry.findings, "gndo:preferredNameForThePerson"));
    EXPECT_TRUE(any_contains(entry.findings, "gndo:dateOfProduction must have exactly the datatype xsd:dateTime"));
    for (const auto& f: entry.findings)
        EXPECT_TRUE(contains(entry.correction_prompt, "- " + f)) << f;
    // assistant answer and correction turn are both in the transcript
    auto const& msgs = out.transcript.messages;
    ASSERT_EQ(msgs.size(), 4U);
    EXPECT_EQ(msgs[1].role, llm::Role::Assistant);
    EXPECT_EQ(msgs[2].content, entry.correction_prompt);
}

TEST(GenerateValidated, AlwaysFaultyExhaustsAfterThreeAttempts)
{
    auto backend = llm::ScriptedBackend({ text_step("", fixture("shapes/extended_faulty.ttl"), true) });
    auto const base = load_fixture_graph("shapes/base.ttl");
    try
    {
        generate_validated({ { llm::ChatMessage::user("extend") }, "m" },
                           { requirements_validator(museum_requirements(), base) }, backend, with_retries(2));
        FAIL() << "expected RepairExhausted";
    }
    catch (const RepairExhausted& e)
    {
        EXPECT_EQ(e.attempts(), 3);
        EXPECT_EQ(e.repair_log().size(), 2U);
        EXPECT_FALSE(e.findings().empty());
        EXPECT_STREQ(e.code().c_str(), "repair_exhausted");
    }
}

TEST(GenerateValidated, AttemptsNeverExceedBudget)
{
    auto rng = std::mt19937_64(5);
    auto const good = fixture("shapes/extended_corrected.ttl");
    for (int round = 0; round < 60; ++round)
    {
        auto const max_retries = std::uniform_int_distribution<int>(0, 4)(rng);
        auto const failures = std::uniform_int_distribution<int>(0, 6)(rng);
        auto script = std::vector<llm::ScriptStep> {};
        for (int i = 0; i < failures; ++i)
            script.push_back(text_step("", "@prefix broken", false));
        script.push_back(text_step("", good, true));
        auto backend = llm::ScriptedBackend(script);
        try
        {
            auto const out = generate_validated({ { llm::ChatMessage::user("go") }, "m" }, { shape_wellformed_validator() },
                                                backend, with_retries(max_retries));
            EXPECT_EQ(out.attempts, failures + 1);
            EXPECT_LE(out.attempts, max_retries + 1);
            EXPECT_EQ(static_cast<int>(out.repair_log.size()), out.attempts - 1);
        }
        catch (const RepairExhausted& e)
        {
            EXPECT_GT(failures, max_retries);
            EXPECT_EQ(e.attempts(), max_retries + 1);
        }
    }
}

TEST(GenerateValidated, ParseErrorsCarryLineAndColumn)
{
    auto backend = llm::ScriptedBackend({
        text_step("go", "```turtle\n@prefix ex: <http://example.org/> .\nex:a ex:b\n```"),
        text_step("Please correct", fixture("shapes/base.ttl")),
    });
    auto const out = generate_validated({ { llm::ChatMessage::user("go") }, "m" }, {}, backend);
    ASSERT_EQ(out.repair_log.size(), 1U);
    EXPECT_TRUE(any_contains(out.repair_log[0].findings, "Turtle syntax error at line"));
    EXPECT_TRUE(any_contains(out.repair_log[0].findings, "column"));
}

TEST(GenerateValidated, NegativeRetriesRejected)
{
    auto backend = llm::ScriptedBackend({});
    EXPECT_THROW(generate_validated({ { llm::ChatMessage::user("go") }, "m" }, {}, backend, with_retries(-1)),
                 llm::InvalidConversation);
}

// validators

TEST(Validators, MonotonicityDetectsEveryDeletedBaseTriple)
{
    auto const base = load_fixture_graph("shapes/base.ttl");
    auto const extended = load_fixture_graph("shapes/extended_corrected.ttl");
    auto const check = monotonicity_validator(base);
    EXPECT_TRUE(check.check(extended).empty());
    auto const sub = rdf::graph_subsumes(base, extended);
    ASSERT_TRUE(sub.subsumed);
    for (const auto& t: base)
    {
        // map the base triple into the extended graph and delete its image
        auto map_term = [&](const rdf::Term& term) {
            return term.is_blank() ? rdf::Term::blank(sub.mapping.at(term.value())) : term;
        };
        auto mutated = extended;
        ASSERT_TRUE(mutated.erase(rdf::Triple(map_term(t.subject), t.predicate, map_term(t.object))));
        auto const findings = check.check(mutated);
        EXPECT_TRUE(has_errors(findings)) << t.to_string();
    }
}

TEST(Validators, RequirementsAcceptCorrectedShapes)
{
    auto const base = load_fixture_graph("shapes/base.ttl");
    auto const check = requirements_validator(museum_requirements(), base);
    EXPECT_TRUE(check.check(load_fixture_graph("shapes/extended_corrected.ttl")).empty());
    auto const faulty = check.check(load_fixture_graph("shapes/extended_faulty.ttl"));
    EXPECT_EQ(faulty.size(), 2U);
}

TEST(Validators, ThrowingValidatorBecomesFinding)
{
    auto const boom = Validator { "boom", [](const rdf::Graph&) -> std::vector<Finding> { throw std::runtime_error("bad"); } };
    auto const findings = run_validators({ boom }, rdf::Graph {});
    ASSERT_EQ(findings.size(), 1U);
    EXPECT_EQ(findings[0].message, "boom: bad");
}

TEST(Validators, UnverifiedIdentifierIsFlagged)
{
    auto known = std::map<std::string, std::string> {};
    auto const check = verified_pid_validator([&] { return known; });
    auto const instance = load_fixture_graph("instance.ttl");
    EXPECT_TRUE(has_errors(check.check(instance)));
    known["118535889"] = std::string(pid::default_gnd_endpoint);
    EXPECT_TRUE(check.check(instance).empty());
}

// prompts

TEST(Prompts, AssetsCoverEveryTask)
{
    for (const auto* name: { "schema_system", "schema_extend", "instance_system", "instance_create", "policy_system",
                             "policy_create", "explain_system", "explain", "repair", "odrl_primer" })
        EXPECT_TRUE(prompts().has(name)) << name;
    EXPECT_TRUE(contains(prompts().raw("repair"), "{{findings}}"));
}

TEST(Prompts, RenderRejectsMissingAndUnusedValues)
{
    EXPECT_EQ(render_template("a {{x}} b", { { "x", "1" } }), "a 1 b");
    EXPECT_THROW(render_template("a {{x}}", {}), PromptError);
    EXPECT_THROW(render_template("a", { { "x", "1" } }), PromptError);
    EXPECT_THROW(render_template("a {{x", { { "x", "1" } }), PromptError);
    // substituted values are not rescanned
    EXPECT_EQ(render_template("{{x}}", { { "x", "{{y}}" } }), "{{y}}");
}

// extend_schema / correct_schema

TEST(ExtendSchema, CuratorInstructionKeepsBaseShapes)
{
    auto h = Harness({ text_step("digital versions of paintings", fixture("scripts/responses/schema_faulty.md")) });
    auto s = base_session();
    auto const report = h.pipeline.extend_schema(s, extend_instruction);
    EXPECT_EQ(report.attempts, 1);
    EXPECT_TRUE(rdf::graph_subsumes(s.base_shapes, s.shapes.source).subsumed);
    auto const person = std::ranges::find_if(s.shapes.shapes, [](const shacl::NodeShape& n) {
        return n.target_class == "https://d-nb.info/standards/elementset/gnd#DifferentiatedPerson";
    });
    EXPECT_NE(person, s.shapes.shapes.end());
    // sh:or is reported, not enforced
    EXPECT_FALSE(report.warnings.empty());
    EXPECT_TRUE(s.has_schema());
    EXPECT_EQ(s.history.size(), 1U);
    ASSERT_TRUE(report.shape_delta);
    EXPECT_FALSE((*report.shape_delta)["added_shapes"].empty());
    // the prompt carries the current shapes and the instruction
    auto const& user = s.transcripts.at("schema").messages.at(1).content;
    EXPECT_TRUE(contains(user, extend_instruction));
    EXPECT_TRUE(contains(user, "```turtle"));
    EXPECT_TRUE(contains(user, "ex:DatasetShape"));
}

TEST(ExtendSchema, DroppedTitleConstraintTriggersRepair)
{
    auto dropped = load_fixture_graph("shapes/extended_corrected.ttl");
    auto const title = rdf::Term::iri("http://purl.org/dc/terms/title");
    auto const path = rdf::Term::iri(std::string(vocab::sh::path));
    for (const auto& t: dropped.subjects(path, title))
    {
        for (const auto& tr: dropped.about(t))
            dropped.erase(tr);
        for (const auto& owner: dropped.subjects(rdf::Term::iri(std::string(vocab::sh::property)), t))
            dropped.erase(rdf::Triple(owner, rdf::Term::iri(std::string(vocab::sh::property)), t));
    }
    auto h = Harness({
        text_step("digital versions", fenced(rdf::serialize_turtle(dropped))),
        text_step("Please correct the following issues", fixture("shapes/extended_corrected.ttl")),
    });
    auto s = base_session();
    auto const report = h.pipeline.extend_schema(s, extend_instruction);
    EXPECT_EQ(report.attempts, 2);
    ASSERT_EQ(report.repair_log.size(), 1U);
    EXPECT_TRUE(any_contains(report.repair_log[0].findings, "the existing shapes must be preserved"));
    EXPECT_TRUE(rdf::graph_subsumes(s.base_shapes, s.shapes.source).subsumed);
}

TEST(ExtendSchema, EmptyInstructionFailsBeforeBackendCall)
{
    auto h = Harness({ text_step("", "unused") });
    auto s = base_session();
    EXPECT_THROW(h.pipeline.extend_schema(s, "  \n"), InvalidRequest);
    EXPECT_EQ(h.backend.remaining(), 1U);
    EXPECT_FALSE(s.has_schema());
}

TEST(ExtendSchema, RequirementsDriveTheRepairLoop)
{
    auto h = Harness({
        text_step("digital versions", fixture("scripts/responses/schema_faulty.md")),
        text_step("Please correct the following issues", fixture("scripts/responses/schema_corrected.ttl")),
    });
    auto s = base_session();
    auto const report = h.pipeline.extend_schema(s, extend_instruction, museum_requirements());
    EXPECT_EQ(report.attempts, 2);
    EXPECT_TRUE(rdf::graph_isomorphic(s.shapes.source, load_fixture_graph("shapes/extended_corrected.ttl")));
    ASSERT_TRUE(s.requirements);
}

TEST(ExtendSchema, FailedTaskLeavesSessionUntouched)
{
    auto h = Harness({ text_step("", "not turtle at all {", true) });
    auto s = base_session();
    auto const before = session_view(s);
    EXPECT_THROW(h.pipeline.extend_schema(s, extend_instruction), RepairExhausted);
    EXPECT_EQ(session_view(s), before);
}

TEST(CorrectSchema, CuratorCorrectionRemovesPreferredName)
{
    auto h = Harness({
        text_step("digital versions", fixture("scripts/responses/schema_faulty.md")),
        text_step("preferred name", fixture("scripts/responses/schema_corrected.ttl")),
    });
    auto s = base_session();
    h.pipeline.extend_schema(s, extend_instruction);
    auto const report = h.pipeline.correct_schema(s, correction);
    EXPECT_EQ(report.attempts, 1);
    EXPECT_TRUE(rdf::graph_isomorphic(s.shapes.source, load_fixture_graph("shapes/extended_corrected.ttl")));
    EXPECT_TRUE(rdf::graph_subsumes(s.base_shapes, s.shapes.source).subsumed);
    ASSERT_TRUE(s.last_delta);
    auto const removed = (*s.last_delta)["removed"];
    EXPECT_TRUE(std::ranges::any_of(removed, [](const json& r) {
        return r["constraint"]["path"] == "gndo:preferredNameForThePerson";
    })) << removed.dump();
    // the correction continues the same conversation
    auto const& msgs = s.transcripts.at("schema").messages;
    ASSERT_EQ(msgs.size(), 5U);
    EXPECT_EQ(msgs[3].content, correction);
    EXPECT_EQ(s.history.back().task, "correct");
}

TEST(CorrectSchema, WithoutSchemaHistoryIsTaskOrderViolation)
{
    auto h = Harness({});
    auto s = base_session();
    EXPECT_THROW(h.pipeline.correct_schema(s, correction), TaskOrderViolation);
}

TEST(CorrectSchema, TruncatedTurtleIsRepaired)
{
    auto const corrected = fixture("shapes/extended_corrected.ttl");
    auto h = Harness({
        text_step("digital versions", fixture("scripts/responses/schema_faulty.md")),
        text_step("preferred name", "```turtle\n" + corrected.substr(0, corrected.size() / 2) + "\n```"),
        text_step("Please correct the following issues", corrected),
    });
    auto s = base_session();
    h.pipeline.extend_schema(s, extend_instruction);
    auto const report = h.pipeline.correct_schema(s, correction);
    EXPECT_EQ(report.attempts, 2);
    ASSERT_EQ(report.repair_log.size(), 1U);
    EXPECT_TRUE(any_contains(report.repair_log[0].findings, "Turtle syntax error at line"));
    EXPECT_TRUE(rdf::graph_isomorphic(s.shapes.source, load_fixture_graph("shapes/extended_corrected.ttl")));
}

// create_instance

namespace
{

auto corrected_session(Harness& h) -> Session
{
    auto s = base_session();
    (void)h;
    s.shapes = shacl::parse_shapes(load_fixture_graph("shapes/extended_corrected.ttl"));
    s.provenance["shapes"] = { "test-model", 1, fixed_now };
    s.transcripts["schema"] = { { llm::ChatMessage::user("x"), llm::ChatMessage::assistant("y") }, "test-model" };
    return s;
}

auto instance_without_policy() -> std::string
{
    auto g = load_fixture_graph("instance.ttl");
    for (const auto& t: g.triples())
    {
        if (t.predicate.value() == vocab::odrl::hasPolicy)
        {
            auto copy = g;
            copy.erase(t);
            return rdf::serialize_turtle(copy);
        }
    }
    return {};
}

} // namespace

TEST(CreateInstance, MuseumScenarioUsesLookupTool)
{
    auto h = Harness({
        lookup_step("Please create an instance", "Caspar David Friedrich"),
        text_step("118535889", fixture("scripts/responses/instance.md")),
    });
    auto s = corrected_session(h);
    auto const report = h.pipeline.create_instance(s, "Please create an instance of it for the painting by Caspar David Friedrich.");
    EXPECT_EQ(report.attempts, 1);
    ASSERT_TRUE(s.instance);
    EXPECT_TRUE(rdf::graph_isomorphic(*s.instance, load_fixture_graph("instance.ttl")));
    EXPECT_EQ(s.verified_pids.at("118535889"), pid::default_gnd_endpoint);
    auto const& msgs = s.transcripts.at("instance").messages;
    ASSERT_EQ(msgs.size(), 5U);
    EXPECT_EQ(msgs[2].role, llm::Role::Assistant);
    EXPECT_EQ(msgs[3].role, llm::Role::Tool);
    EXPECT_TRUE(contains(msgs[3].content, "118535889"));
}

TEST(CreateInstance, MissingPolicyTripleTriggersRepair)
{
    auto h = Harness({
        lookup_step("Please create an instance", "Caspar David Friedrich"),
        text_step("118535889", fenced(instance_without_policy())),
        text_step("Please correct the following issues", fixture("scripts/responses/instance.md")),
    });
    auto s = corrected_session(h);
    auto const report = h.pipeline.create_instance(s, "Please create an instance for the painting.");
    EXPECT_EQ(report.attempts, 2);
    ASSERT_EQ(report.repair_log.size(), 1U);
    EXPECT_TRUE(any_contains(report.repair_log[0].findings, "odrl:hasPolicy")) << report.repair_log[0].findings.front();
}

TEST(CreateInstance, UnknownPainterEndsInRepairExhausted)
{
    auto no_artist = load_fixture_graph("instance.ttl");
    auto const gnd_id = rdf::Term::iri(std::string(vocab::gndo::gndIdentifier));
    for (const auto& t: no_artist.triples())
    {
        if (t.predicate == gnd_id)
        {
            auto copy = no_artist;
            copy.erase(t);
            no_artist = copy;
            break;
        }
    }
    auto h = Harness({
        lookup_step("Please create an instance", "Zzzz Nonexistent Painter"),
        text_step("no match found", fenced(rdf::serialize_turtle(no_artist))),
        text_step("Please correct the following issues", fenced(rdf::serialize_turtle(no_artist)), true),
    });
    auto s = corrected_session(h);
    try
    {
        h.pipeline.create_instance(s, "Please create an instance for a painting by Zzzz Nonexistent Painter.");
        FAIL() << "expected RepairExhausted";
    }
    catch (const RepairExhausted& e)
    {
        EXPECT_EQ(e.attempts(), 3);
        EXPECT_TRUE(any_contains(e.findings(), "gndo:gndIdentifier"));
        auto const& msgs = e.transcript().messages;
        EXPECT_TRUE(std::ranges::any_of(msgs, [](const llm::ChatMessage& m) {
            return m.role == llm::Role::Tool && contains(m.content, "no match found");
        }));
    }
    EXPECT_FALSE(s.instance);
}

TEST(CreateInstance, HallucinatedIdentifierIsRejected)
{
    auto h = Harness({
        text_step("Please create an instance", fixture("scripts/responses/instance.md")),
        lookup_step("was not returned by the lookup tool", "Caspar David Friedrich"),
        text_step("118535889", fixture("scripts/responses/instance.md")),
    });
    auto s = corrected_session(h);
    auto const report = h.pipeline.create_instance(s, "Please create an instance for the painting.");
    EXPECT_EQ(report.attempts, 2);
    EXPECT_TRUE(any_contains(report.repair_log[0].findings, "was not returned by the lookup tool"));
}

TEST(CreateInstance, RequiresCommittedSchema)
{
    auto h = Harness({});
    auto s = base_session();
    EXPECT_THROW(h.pipeline.create_instance(s, "create"), TaskOrderViolation);
}

// create_policy

namespace
{

auto instance_session(Harness& h) -> Session
{
    auto s = corrected_session(h);
    s.instance = load_fixture_graph("instance.ttl");
    s.verified_pids["118535889"] = std::string(pid::default_gnd_endpoint);
    s.provenance["instance"] = { "test-model", 1, fixed_now };
    return s;
}

const std::string policy_instruction = "Create an ODRL policy that allows the dataset to be used within Germany until 2024-05-10.";

} // namespace

TEST(CreatePolicy, MuseumScenarioPreservesIri)
{
    auto h = Harness({ text_step("ODRL policy that allows", fixture("scripts/responses/policy.md")) });
    auto s = instance_session(h);
    auto const report = h.pipeline.create_policy(s, policy_instruction);
    EXPECT_EQ(report.attempts, 1);
    ASSERT_TRUE(s.policy);
    EXPECT_EQ(*s.policy, odrl::parse_policy(load_fixture_graph("policy.ttl")));
    EXPECT_EQ(s.policy->iri, "http://example.org/policy/12345");
    auto const& user = s.transcripts.at("policy").messages.at(1).content;
    EXPECT_TRUE(contains(user, "<http://example.org/policy/12345>"));
    EXPECT_TRUE(contains(s.transcripts.at("policy").messages.at(0).content, "odrl:Set"));
}

TEST(CreatePolicy, FreshIriIsReportedAndRepaired)
{
    auto fresh = fixture("policy.ttl");
    fresh.replace(fresh.find("policy/12345"), 12, "policy/99999");
    auto h = Harness({
        text_step("ODRL policy that allows", fenced(fresh)),
        text_step("Please correct the following issues", fixture("scripts/responses/policy.md")),
    });
    auto s = instance_session(h);
    auto const report = h.pipeline.create_policy(s, policy_instruction);
    EXPECT_EQ(report.attempts, 2);
    EXPECT_TRUE(any_contains(report.repair_log[0].findings, "policy IRI must be <http://example.org/policy/12345>"));
    EXPECT_EQ(s.policy->iri, "http://example.org/policy/12345");
}

TEST(CreatePolicy, WithoutInstanceIsTaskOrderViolation)
{
    auto h = Harness({});
    auto s = corrected_session(h);
    EXPECT_THROW(h.pipeline.create_policy(s, policy_instruction), TaskOrderViolation);
}

TEST(CreatePolicy, InstanceWithoutPolicyReferenceFailsPrecondition)
{
    auto h = Harness({});
    auto s = instance_session(h);
    s.instance = rdf::parse_turtle(instance_without_policy());
    EXPECT_THROW(h.pipeline.create_policy(s, policy_instruction), PreconditionFailed);
    s.instance->insert(rdf::Term::iri("http://example.org/a"), rdf::Term::iri(std::string(vocab::odrl::hasPolicy)),
                       rdf::Term::iri("http://example.org/p1"));
    s.instance->insert(rdf::Term::iri("http://example.org/a"), rdf::Term::iri(std::string(vocab::odrl::hasPolicy)),
                       rdf::Term::iri("http://example.org/p2"));
    EXPECT_THROW(h.pipeline.create_policy(s, policy_instruction), PreconditionFailed);
}

TEST(CreatePolicy, InstanceIsFrozenOncePolicyExists)
{
    auto h = Harness({ text_step("ODRL policy that allows", fixture("scripts/responses/policy.md")) });
    auto s = instance_session(h);
    h.pipeline.create_policy(s, policy_instruction);
    EXPECT_THROW(h.pipeline.create_instance(s, "again"), TaskOrderViolation);
    EXPECT_THROW(h.pipeline.extend_schema(s, "again"), TaskOrderViolation);
}

// explain

TEST(Explain, MuseumAnswerWithProvenanceFooter)
{
    auto h = Harness({
        text_step("ODRL policy that allows", fixture("scripts/responses/policy.md")),
        text_step("explain the following instance", fixture("scripts/responses/explanation.txt")),
    });
    auto s = instance_session(h);
    h.pipeline.create_policy(s, policy_instruction);
    auto const report = h.pipeline.explain(s);
    EXPECT_TRUE(report.artifact.starts_with("This set of information is essentially a structured way to describe a dataset"));
    EXPECT_TRUE(contains(report.artifact, "- GND identifier 118535889 (source: https://sparql.dnb.de/api/gnd)"));
    EXPECT_TRUE(report.artifact.starts_with(fixture("scripts/responses/explanation.txt")));
    // a fresh conversation: system prompt plus one user turn plus the answer
    EXPECT_EQ(s.transcripts.at("explain").messages.size(), 3U);
}

TEST(Explain, WithoutPolicyIsTaskOrderViolation)
{
    auto h = Harness({});
    auto s = instance_session(h);
    EXPECT_THROW(h.pipeline.explain(s), TaskOrderViolation);
}

TEST(Explain, FooterWithoutIdentifiers)
{
    auto const footer = provenance_footer(rdf::parse_turtle("<http://e/a> <http://e/b> \"x\" ."), {});
    EXPECT_TRUE(contains(footer, "no persistent identifiers present"));
    auto const unverified = provenance_footer(load_fixture_graph("instance.ttl"), {});
    EXPECT_TRUE(contains(unverified, "118535889 (source: unverified)"));
}

// scenario, export and persistence

namespace
{

auto museum_scenario() -> Scenario
{
    return load_scenario(fixtures_dir() / "scenarios" / "museum.json");
}

} // namespace

TEST(Scenario, MuseumReplayProducesListedArtifacts)
{
    auto const result = run_scenario(museum_scenario(), prompts());
    auto const& s = result.session;
    ASSERT_EQ(result.reports.size(), 5U);
    EXPECT_TRUE(rdf::graph_subsumes(s.base_shapes, s.shapes.source).subsumed);
    EXPECT_TRUE(rdf::graph_isomorphic(s.shapes.source, load_fixture_graph("shapes/extended_corrected.ttl")));
    ASSERT_TRUE(s.instance && s.policy && s.explanation);
    EXPECT_TRUE(rdf::graph_isomorphic(*s.instance, load_fixture_graph("instance.ttl")));
    EXPECT_EQ(*s.policy, odrl::parse_policy(load_fixture_graph("policy.ttl")));
    auto const has_policy = s.instance->objects(rdf::Term::iri("http://example.org/DerWandererÜberDemNebelmeer"),
                                                rdf::Term::iri(std::string(vocab::odrl::hasPolicy)));
    ASSERT_EQ(has_policy.size(), 1U);
    EXPECT_EQ(has_policy[0].value(), s.policy->iri);
}

TEST(Scenario, ReplayIsByteIdentical)
{
    auto const a = run_scenario(museum_scenario(), prompts());
    auto const b = run_scenario(museum_scenario(), prompts());
    EXPECT_EQ(a.artifacts, b.artifacts);
    EXPECT_EQ(to_json(a.artifacts).dump(), to_json(b.artifacts).dump());
    EXPECT_EQ(session_view(a.session).dump(), session_view(b.session).dump());
}

TEST(Scenario, RepairScenarioConvergesInTwoAttempts)
{
    auto const result = run_scenario(load_scenario(fixtures_dir() / "scenarios" / "repair.json"), prompts());
    ASSERT_EQ(result.reports.size(), 1U);
    EXPECT_EQ(result.reports[0].attempts, 2);
}

TEST(Scenario, UnknownTaskRejected)
{
    auto h = Harness({});
    auto s = base_session();
    EXPECT_THROW(run_step(h.pipeline, s, { "paint", "x", std::nullopt }), InvalidRequest);
}

TEST(Export, FreshSessionHasNoArtifacts)
{
    auto const a = export_artifacts(base_session());
    EXPECT_EQ(a, ArtifactSet {});
}

TEST(Export, AfterExtendOnlyShapesAndDiagram)
{
    auto h = Harness({ text_step("digital versions", fixture("scripts/responses/schema_corrected.ttl")) });
    auto const s = schema_session(h);
    auto const a = export_artifacts(s);
    EXPECT_TRUE(a.shapes_turtle && a.diagram_text);
    EXPECT_FALSE(a.instance_turtle || a.policy_turtle || a.explanation_text);
    EXPECT_EQ(a.provenance.size(), 1U);
}

TEST(Export, CompletedScenarioArtifactsRoundTrip)
{
    auto const result = run_scenario(museum_scenario(), prompts());
    auto const& a = result.artifacts;
    ASSERT_TRUE(a.shapes_turtle && a.instance_turtle && a.policy_turtle && a.explanation_text && a.diagram_text);
    EXPECT_TRUE(rdf::graph_isomorphic(rdf::parse_turtle(*a.shapes_turtle), result.session.shapes.source));
    EXPECT_TRUE(rdf::graph_isomorphic(rdf::parse_turtle(*a.instance_turtle), *result.session.instance));
    EXPECT_TRUE(rdf::graph_isomorphic(rdf::parse_turtle(*a.policy_turtle), *result.session.policy_graph));
    for (const auto& [name, p]: a.provenance)
    {
        EXPECT_EQ(p.model_id, "gpt-4-scripted") << name;
        EXPECT_EQ(p.timestamp, fixed_now) << name;
    }
}

class Persistence: public ::testing::Test
{
  protected:
    void SetUp() override
    {
        dir = std::filesystem::temp_directory_path() / ("fairds_sessions_" + std::to_string(::getpid()) + "_" +
                                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::remove_all(dir);
    }
    void TearDown() override { std::filesystem::remove_all(dir); }
    std::filesystem::path dir;
};

TEST_F(Persistence, CompletedSessionRoundTrips)
{
    auto const result = run_scenario(museum_scenario(), prompts());
    save_session(result.session, dir);
    for (const auto* file: { "session.json", "base_shapes.ttl", "shapes.ttl", "instance.ttl", "policy.ttl",
                             "explanation.txt", "diagram.puml" })
        EXPECT_TRUE(std::filesystem::exists(dir / "scenario" / file)) << file;
    auto const meta = json::parse(read_text(dir / "scenario" / "session.json"));
    EXPECT_EQ(meta["schema_version"], session_schema_version);

    auto const loaded = load_session(dir, "scenario");
    EXPECT_EQ(export_artifacts(loaded), result.artifacts);
    EXPECT_EQ(session_view(loaded), session_view(result.session));
    EXPECT_EQ(loaded.history, result.session.history);
    EXPECT_EQ(loaded.verified_pids, result.session.verified_pids);
}

TEST_F(Persistence, PartialSessionRoundTripsAndResumes)
{
    auto h = Harness({
        text_step("digital versions", fixture("scripts/responses/schema_faulty.md")),
        text_step("preferred name", fixture("scripts/responses/schema_corrected.ttl")),
    });
    auto s = base_session();
    h.pipeline.extend_schema(s, extend_instruction);
    save_session(s, dir);
    auto loaded = load_session(dir, s.id);
    EXPECT_EQ(session_view(loaded), session_view(s));
    // the stored transcript lets a correction continue after reload
    h.pipeline.correct_schema(loaded, correction);
    EXPECT_TRUE(rdf::graph_isomorphic(loaded.shapes.source, load_fixture_graph("shapes/extended_corrected.ttl")));
}

TEST_F(Persistence, MissingAndCorruptSessions)
{
    EXPECT_THROW(load_session(dir, "nope"), SessionNotFound);
    EXPECT_THROW(load_session(dir, "../etc"), SessionNotFound);
    auto const s = base_session();
    save_session(s, dir);
    write_file_atomic(dir / s.id / "session.json", "{\"schema_version\": 1");
    EXPECT_THROW(load_session(dir, s.id), CorruptSession);
    write_file_atomic(dir / s.id / "session.json", "{\"schema_version\": 99}");
    EXPECT_THROW(load_session(dir, s.id), CorruptSession);
}

TEST(Session, IdValidation)
{
    EXPECT_TRUE(is_valid_session_id("abc-DEF_123"));
    EXPECT_FALSE(is_valid_session_id(""));
    EXPECT_FALSE(is_valid_session_id("a/b"));
    EXPECT_FALSE(is_valid_session_id(".."));
    EXPECT_FALSE(is_valid_session_id(std::string(65, 'a')));
    EXPECT_THROW(make_session("a b", rdf::Graph {}), InvalidRequest);
}

TEST(Session, RequirementsJsonRoundTrip)
{
    auto const r = museum_requirements();
    EXPECT_EQ(requirements_from_json(to_json(r)), r);
    EXPECT_THROW(requirements_from_json(json { { "required", json::array({ { { "path", "relative" } } }) } }), InvalidRequest);
    EXPECT_THROW(requirements_from_json(json { { "required", json::array({ 5 }) } }), InvalidRequest);
}

// Random task sequences never break the ordering invariant, and every stored
// artifact passed its validators.
TEST(TaskOrder, RandomSequencesKeepInvariants)
{
    auto const script = std::vector<llm::ScriptStep> {
        text_step("digital versions", fixture("scripts/responses/schema_corrected.ttl"), true),
        text_step("preferred name", fixture("scripts/responses/schema_corrected.ttl"), true),
        // policy and explain prompts quote the instance, so they match first
        text_step("ODRL policy that allows", fixture("scripts/responses/policy.md"), true),
        text_step("explain the following instance", "An explanation.", true),
        text_step("118535889", fixture("scripts/responses/instance.md"), true),
    };
    auto const tasks = std::vector<ScenarioStep> {
        { "extend", extend_instruction, std::nullopt },
        { "correct", correction, std::nullopt },
        { "instance", "Please create an instance of the painting.", std::nullopt },
        { "policy", policy_instruction, std::nullopt },
        { "explain", "", std::nullopt },
    };
    auto rng = std::mt19937_64(99);
    for (int round = 0; round < 40; ++round)
    {
        auto script_copy = script;
        // the lookup step is consumed once; give each round plenty of them
        for (int i = 0; i < 6; ++i)
            script_copy.push_back(lookup_step("Please create an instance", "Caspar David Friedrich"));
        auto h = Harness(script_copy);
        auto s = base_session();
        for (int step = 0; step < 8; ++step)
        {
            auto const& task = tasks[std::uniform_int_distribution<std::size_t>(0, tasks.size() - 1)(rng)];
            auto const had_policy = s.policy.has_value();
            try
            {
                run_step(h.pipeline, s, task);
            }
            catch (const TaskOrderViolation&)
            {
            }
            catch (const PreconditionFailed&)
            {
            }
            EXPECT_TRUE(!s.policy || s.instance);
            EXPECT_TRUE(!s.instance || s.has_schema());
            if (task.task == "policy" && !had_policy && s.policy)
            {
                EXPECT_EQ(s.policy->iri, "http://example.org/policy/12345");
            }
            EXPECT_TRUE(rdf::graph_subsumes(s.base_shapes, s.shapes.source).subsumed);
            if (s.instance)
            {
                EXPECT_TRUE(shacl::validate(*s.instance, s.shapes).conforms);
            }
        }
    }
}
