// SPDX-License-Identifier: Apache-2.0
#include <fairds/llm/wire.hpp>
#include <fairds/pipeline/session.hpp>
#include <fairds/rdf/turtle.hpp>
#include <fairds/shacl/diagram.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fairds::pipeline
{

using nlohmann::json;

auto is_valid_session_id(std::string_view id) noexcept -> bool
{
    return !id.empty() && id.size() <= 64 && std::ranges::all_of(id, [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    });
}

auto make_session(std::string id, rdf::Graph base_shapes) -> Session
{
    if (!is_valid_session_id(id))
        throw InvalidRequest(fmt::format("invalid session id '{}'", id));
    auto session = Session {};
    session.id = std::move(id);
    try
    {
        session.shapes = shacl::parse_shapes(base_shapes);
    }
    catch (const Error& e)
    {
        throw InvalidRequest(fmt::format("base shapes are not usable: {}", e.what()));
    }
    session.base_shapes = std::move(base_shapes);
    return session;
}

auto export_artifacts(const Session& session) -> ArtifactSet
{
    auto out = ArtifactSet {};
    if (session.has_schema())
    {
        out.shapes_turtle = rdf::serialize_turtle(session.shapes.source);
        out.diagram_text = shacl::export_diagram(session.shapes);
    }
    if (session.instance)
        out.instance_turtle = rdf::serialize_turtle(*session.instance);
    if (session.policy_graph)
        out.policy_turtle = rdf::serialize_turtle(*session.policy_graph);
    if (session.explanation)
        out.explanation_text = *session.explanation;
    out.provenance = session.provenance;
    return out;
}

auto to_json(const ArtifactProvenance& p) -> json
{
    return { { "model_id", p.model_id }, { "attempts", p.attempts }, { "timestamp", rdf::format_datetime(p.timestamp) } };
}

namespace
{

    auto optional_json(const std::optional<std::string>& value) -> json
    {
        return value ? json(*value) : json(nullptr);
    }

    auto instant_from_json(const json& j) -> rdf::Instant
    {
        auto const parsed = rdf::parse_datetime(j.get<std::string>());
        if (!parsed)
            throw CorruptSession(fmt::format("invalid timestamp '{}'", j.get<std::string>()));
        return *parsed;
    }

    auto provenance_from_json(const json& j) -> ArtifactProvenance
    {
        return { j.at("model_id").get<std::string>(), j.at("attempts").get<int>(), instant_from_json(j.at("timestamp")) };
    }

    auto findings_from_json(const json& j) -> std::vector<Finding>
    {
        auto out = std::vector<Finding> {};
        for (const auto& f: j)
            out.push_back({ f.at("severity") == "error" ? Severity::Error : Severity::Warning, f.at("message").get<std::string>() });
        return out;
    }

    auto repair_entry_from_json(const json& j) -> RepairEntry
    {
        return { j.at("attempt").get<int>(), j.at("findings").get<std::vector<std::string>>(),
                 j.at("correction_prompt").get<std::string>() };
    }

    auto history_to_json(const TaskRecord& r) -> json
    {
        auto log = json::array();
        for (const auto& e: r.repair_log)
            log.push_back(to_json(e));
        return { { "task", r.task },       { "instruction", r.instruction }, { "attempts", r.attempts },
                 { "repair_log", log },    { "warnings", to_json(r.warnings) },
                 { "timestamp", rdf::format_datetime(r.timestamp) } };
    }

    auto history_from_json(const json& j) -> TaskRecord
    {
        auto r = TaskRecord {};
        r.task = j.at("task").get<std::string>();
        r.instruction = j.at("instruction").get<std::string>();
        r.attempts = j.at("attempts").get<int>();
        for (const auto& e: j.at("repair_log"))
            r.repair_log.push_back(repair_entry_from_json(e));
        r.warnings = findings_from_json(j.at("warnings"));
        r.timestamp = instant_from_json(j.at("timestamp"));
        return r;
    }

    auto read_file(const std::filesystem::path& path) -> std::string
    {
        auto in = std::ifstream(path, std::ios::binary);
        if (!in)
            throw CorruptSession(fmt::format("cannot read {}", path.string()));
        auto buffer = std::ostringstream {};
        buffer << in.rdbuf();
        return buffer.str();
    }

} // namespace

auto to_json(const ArtifactSet& a) -> json
{
    auto provenance = json::object();
    for (const auto& [name, p]: a.provenance)
        provenance[name] = to_json(p);
    return { { "shapes", optional_json(a.shapes_turtle) },
             { "instance", optional_json(a.instance_turtle) },
             { "policy", optional_json(a.policy_turtle) },
             { "explanation", optional_json(a.explanation_text) },
             { "diagram", optional_json(a.diagram_text) },
             { "provenance", provenance } };
}

auto to_json(const RepairEntry& e) -> json
{
    return { { "attempt", e.attempt }, { "findings", e.findings }, { "correction_prompt", e.correction_prompt } };
}

auto to_json(const std::vector<Finding>& findings) -> json
{
    auto out = json::array();
    for (const auto& f: findings)
        out.push_back({ { "severity", f.severity == Severity::Error ? "error" : "warning" }, { "message", f.message } });
    return out;
}

auto to_json(const SchemaRequirements& r) -> json
{
    auto required = json::array();
    for (const auto& p: r.required)
    {
        auto entry = json { { "path", p.path } };
        if (p.datatype)
            entry["datatype"] = *p.datatype;
        if (p.class_)
            entry["class"] = *p.class_;
        required.push_back(std::move(entry));
    }
    return { { "required", required }, { "closed", r.closed } };
}

auto requirements_from_json(const json& j) -> SchemaRequirements
{
    try
    {
        auto r = SchemaRequirements {};
        r.closed = j.value("closed", false);
        for (const auto& p: j.value("required", json::array()))
        {
            auto req = PathRequirement { p.at("path").get<std::string>(), std::nullopt, std::nullopt };
            if (p.contains("datatype"))
                req.datatype = p.at("datatype").get<std::string>();
            if (p.contains("class"))
                req.class_ = p.at("class").get<std::string>();
            if (!rdf::has_scheme(req.path))
                throw InvalidRequest(fmt::format("requirement path '{}' is not an absolute IRI", req.path));
            r.required.push_back(std::move(req));
        }
        return r;
    }
    catch (const json::exception& e)
    {
        throw InvalidRequest(fmt::format("invalid requirements: {}", e.what()));
    }
}

auto session_view(const Session& s) -> json
{
    auto transcripts = json::object();
    for (const auto& [task, conv]: s.transcripts)
        transcripts[task] = llm::to_json(conv);
    auto history = json::array();
    for (const auto& r: s.history)
        history.push_back(history_to_json(r));
    auto const artifacts = export_artifacts(s);
    return {
        { "id", s.id },
        { "state",
          { { "schema", s.has_schema() },
            { "instance", s.instance.has_value() },
            { "policy", s.policy.has_value() },
            { "explanation", s.explanation.has_value() } } },
        { "base_shapes", rdf::serialize_turtle(s.base_shapes) },
        { "artifacts", to_json(artifacts) },
        { "transcripts", transcripts },
        { "history", history },
        { "shape_delta", s.last_delta ? *s.last_delta : json(nullptr) },
        { "requirements", s.requirements ? to_json(*s.requirements) : json(nullptr) },
        { "verified_pids", s.verified_pids },
    };
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    auto const temp = std::filesystem::path(path.string() + ".tmp");
    {
        auto out = std::ofstream(temp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error(fmt::format("cannot write {}", temp.string()));
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw std::runtime_error(fmt::format("cannot write {}", temp.string()));
    }
    std::filesystem::rename(temp, path);
}

void save_session(const Session& s, const std::filesystem::path& sessions_dir)
{
    if (!is_valid_session_id(s.id))
        throw InvalidRequest(fmt::format("invalid session id '{}'", s.id));
    auto const dir = sessions_dir / s.id;
    std::filesystem::create_directories(dir);
    auto const artifacts = export_artifacts(s);
    auto files = json::object();
    auto put = [&](const char* key, const char* file, const std::optional<std::string>& content) {
        if (content)
        {
            write_file_atomic(dir / file, *content);
            files[key] = file;
        }
        else
            std::filesystem::remove(dir / file);
    };
    put("base_shapes", "base_shapes.ttl", rdf::serialize_turtle(s.base_shapes));
    put("shapes", "shapes.ttl", artifacts.shapes_turtle);
    put("instance", "instance.ttl", artifacts.instance_turtle);
    put("policy", "policy.ttl", artifacts.policy_turtle);
    put("explanation", "explanation.txt", artifacts.explanation_text);
    put("diagram", "diagram.puml", artifacts.diagram_text);

    auto meta = session_view(s);
    meta.erase("artifacts");
    meta.erase("base_shapes");
    meta.erase("state");
    meta["schema_version"] = session_schema_version;
    meta["files"] = files;
    auto provenance = json::object();
    for (const auto& [name, p]: s.provenance)
        provenance[name] = to_json(p);
    meta["provenance"] = provenance;
    write_file_atomic(dir / "session.json", meta.dump(2) + "\n");
}

auto load_session(const std::filesystem::path& sessions_dir, const std::string& id) -> Session
{
    if (!is_valid_session_id(id) || !std::filesystem::exists(sessions_dir / id / "session.json"))
        throw SessionNotFound(id);
    auto const dir = sessions_dir / id;
    try
    {
        auto const meta = json::parse(read_file(dir / "session.json"));
        if (meta.at("schema_version").get<int>() != session_schema_version)
            throw CorruptSession(fmt::format("session {} has unsupported schema_version {}", id,
                                             meta.at("schema_version").dump()));
        auto const& files = meta.at("files");
        auto turtle = [&](const char* key) -> std::optional<rdf::Graph> {
            if (!files.contains(key))
                return std::nullopt;
            return rdf::parse_turtle(read_file(dir / files.at(key).get<std::string>()));
        };

        auto s = make_session(id, *turtle("base_shapes"));
        for (const auto& [name, p]: meta.at("provenance").items())
            s.provenance[name] = provenance_from_json(p);
        if (auto shapes = turtle("shapes"))
            s.shapes = shacl::parse_shapes(*shapes);
        s.instance = turtle("instance");
        if (auto policy = turtle("policy"))
        {
            s.policy = odrl::parse_policy(*policy);
            s.policy_graph = std::move(policy);
        }
        if (files.contains("explanation"))
            s.explanation = read_file(dir / files.at("explanation").get<std::string>());
        for (const auto& [task, conv]: meta.at("transcripts").items())
            s.transcripts[task] = llm::conversation_from_json(conv);
        for (const auto& r: meta.at("history"))
            s.history.push_back(history_from_json(r));
        if (!meta.at("shape_delta").is_null())
            s.last_delta = meta.at("shape_delta");
        if (!meta.at("requirements").is_null())
            s.requirements = requirements_from_json(meta.at("requirements"));
        s.verified_pids = meta.at("verified_pids").get<std::map<std::string, std::string>>();
        return s;
    }
    catch (const CorruptSession&)
    {
        throw;
    }
    catch (const std::exception& e)
    {
        throw CorruptSession(fmt::format("session {} cannot be loaded: {}", id, e.what()));
    }
}

} // namespace fairds::pipeline
