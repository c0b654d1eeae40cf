// SPDX-License-Identifier: Apache-2.0
#include <fairds/error.hpp>
#include <fairds/llm/backend.hpp>
#include <fairds/pipeline/repair.hpp>
#include <fairds/pipeline/session.hpp>
#include <fairds/service/api.hpp>

#include <map>

namespace fairds::service
{

using nlohmann::json;

auto status_for_code(const std::string& code) -> int
{
    static const std::map<std::string, int> statuses = {
        { "session_not_found", 404 },
        { "task_order_violation", 409 },
        { "precondition_failed", 409 },
        { "invalid_request", 400 },
        { "syntax_error", 400 },
        { "unresolved_prefix", 400 },
        { "relative_iri_without_base", 400 },
        { "malformed_shape", 400 },
        { "cyclic_node_reference", 400 },
        { "too_many_blank_nodes", 400 },
        { "unsupported_datatype", 400 },
        { "no_policy_found", 400 },
        { "multiple_policies", 400 },
        { "malformed_permission", 400 },
        { "malformed_policy", 400 },
        { "invalid_usage_context", 400 },
        { "empty_name", 400 },
        { "not_found", 404 },
        { "method_not_allowed", 405 },
        { "repair_exhausted", 422 },
        { "max_turns_exceeded", 422 },
        { "rate_limited", 429 },
        { "backend_unavailable", 502 },
        { "malformed_response", 502 },
        { "context_too_long", 502 },
        { "endpoint_unreachable", 502 },
        { "endpoint_timeout", 504 },
        { "malformed_results", 502 },
    };
    auto const it = statuses.find(code);
    return it == statuses.end() ? 500 : it->second;
}

auto api_error_from(const std::exception& e) -> ApiError
{
    auto const* error = dynamic_cast<const Error*>(&e);
    if (error == nullptr)
        return { 500, "internal_error", e.what(), std::nullopt, std::nullopt };
    auto out = ApiError { status_for_code(error->code()), error->code(), e.what(), std::nullopt, std::nullopt };
    if (auto const* exhausted = dynamic_cast<const pipeline::RepairExhausted*>(&e))
    {
        auto log = json::array();
        for (const auto& entry: exhausted->repair_log())
            log.push_back(pipeline::to_json(entry));
        out.details = json { { "attempts", exhausted->attempts() }, { "findings", exhausted->findings() }, { "repair_log", log } };
    }
    else if (auto const* limited = dynamic_cast<const llm::RateLimited*>(&e); limited && limited->retry_after())
    {
        out.retry_after = limited->retry_after()->count();
    }
    return out;
}

auto to_json(const ApiError& error) -> json
{
    auto body = json { { "code", error.code }, { "message", error.message } };
    if (error.details)
        body["details"] = *error.details;
    return { { "error", body } };
}

} // namespace fairds::service
