// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/llm/types.hpp>
#include <fairds/odrl/policy.hpp>
#include <fairds/pid/resolver.hpp>
#include <fairds/pipeline/repair.hpp>
#include <fairds/pipeline/validators.hpp>
#include <fairds/rdf/literal.hpp>
#include <fairds/shacl/shapes.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace fairds::pipeline
{

inline constexpr int session_schema_version = 1;

struct ArtifactProvenance
{
    std::string model_id;
    int attempts = 0;
    rdf::Instant timestamp;

    auto operator==(const ArtifactProvenance&) const -> bool = default;
};

/// One committed curator task.
struct TaskRecord
{
    /// extend, correct, instance, policy or explain
    std::string task;
    std::string instruction;
    int attempts = 0;
    std::vector<RepairEntry> repair_log;
    std::vector<Finding> warnings;
    rdf::Instant timestamp;

    auto operator==(const TaskRecord&) const -> bool = default;
};

/// State of one curator workflow. Invariant: policy implies instance,
/// instance implies a committed schema.
struct Session
{
    std::string id;
    /// Shapes the session started from; monotonicity is checked against them.
    rdf::Graph base_shapes;
    /// Current shapes: the base shapes until a schema task commits.
    shacl::ShapeSet shapes;
    std::optional<rdf::Graph> instance;
    std::optional<rdf::Graph> policy_graph;
    std::optional<odrl::Policy> policy;
    /// Model answer followed by the provenance footer.
    std::optional<std::string> explanation;
    /// Conversation per task family: schema, instance, policy, explain.
    std::map<std::string, llm::Conversation> transcripts;
    /// Keyed by shapes, instance, policy, explanation.
    std::map<std::string, ArtifactProvenance> provenance;
    std::vector<TaskRecord> history;
    /// Delta of the last schema task, as reported to clients.
    std::optional<nlohmann::json> last_delta;
    std::optional<SchemaRequirements> requirements;
    /// Identifiers returned by the lookup tool, with their endpoint.
    std::map<std::string, std::string> verified_pids;

    /// Runtime only: the session's cached resolver.
    std::shared_ptr<pid::PidResolver> resolver;

    [[nodiscard]] auto has_schema() const -> bool { return provenance.contains("shapes"); }
};

/// Starts a session from base shapes. Throws InvalidRequest for an invalid
/// id or shapes that do not parse.
auto make_session(std::string id, rdf::Graph base_shapes) -> Session;

/// Ids are 1 to 64 characters from [A-Za-z0-9_-].
auto is_valid_session_id(std::string_view id) noexcept -> bool;

struct ArtifactSet
{
    std::optional<std::string> shapes_turtle;
    std::optional<std::string> instance_turtle;
    std::optional<std::string> policy_turtle;
    std::optional<std::string> explanation_text;
    std::optional<std::string> diagram_text;
    std::map<std::string, ArtifactProvenance> provenance;

    auto operator==(const ArtifactSet&) const -> bool = default;
};

/// Serializes every committed artifact; the diagram accompanies committed
/// shapes. Base shapes alone are not an artifact.
auto export_artifacts(const Session& session) -> ArtifactSet;

auto to_json(const ArtifactSet& artifacts) -> nlohmann::json;
auto to_json(const ArtifactProvenance& provenance) -> nlohmann::json;
auto to_json(const RepairEntry& entry) -> nlohmann::json;
auto to_json(const std::vector<Finding>& findings) -> nlohmann::json;

auto to_json(const SchemaRequirements& requirements) -> nlohmann::json;
/// `{"required": [{"path", "datatype"?, "class"?}], "closed": bool}`.
/// Throws InvalidRequest.
auto requirements_from_json(const nlohmann::json& j) -> SchemaRequirements;

/// Client view: metadata, artifacts, transcripts and history.
auto session_view(const Session& session) -> nlohmann::json;

/// Writes `<sessions_dir>/<id>/`: session.json plus one file per artifact.
/// Each file is written to a temporary name and renamed into place;
/// session.json goes last.
void save_session(const Session& session, const std::filesystem::path& sessions_dir);

/// Throws SessionNotFound or CorruptSession.
auto load_session(const std::filesystem::path& sessions_dir, const std::string& id) -> Session;

/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

class InvalidRequest: public Error
{
  public:
    explicit InvalidRequest(const std::string& detail): Error("invalid_request", detail) {}
};

class TaskOrderViolation: public Error
{
  public:
    explicit TaskOrderViolation(const std::string& detail): Error("task_order_violation", detail) {}
};

class PreconditionFailed: public Error
{
  public:
    explicit PreconditionFailed(const std::string& detail): Error("precondition_failed", detail) {}
};

class SessionNotFound: public Error
{
  public:
    explicit SessionNotFound(const std::string& id): Error("session_not_found", "no session '" + id + "'") {}
};

class CorruptSession: public Error
{
  public:
    explicit CorruptSession(const std::string& detail): Error("corrupt_session", detail) {}
};

} // namespace fairds::pipeline
