// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fairds/pipeline/scenario.hpp>
#include <fairds/service/api.hpp>
#include <fairds/service/config.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace fairds::service
{

struct HttpResponse
{
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::multimap<std::string, std::string> headers;
};

/// The HTTP API without the socket: routes a method, path and body to the
/// pipeline. Safe for concurrent calls; tasks on one session are serialized.
class Service
{
  public:
    explicit Service(ServiceConfig cfg);
    ~Service();
    Service(const Service&) = delete;
    auto operator=(const Service&) -> Service& = delete;

    auto handle(const std::string& method, const std::string& path, const std::string& body) -> HttpResponse;

    [[nodiscard]] auto config() const noexcept -> const ServiceConfig& { return _cfg; }

  private:
    struct Slot;

    auto slot(const std::string& id) -> std::shared_ptr<Slot>;
    auto make_backend() const -> std::unique_ptr<llm::Backend>;
    auto route(const std::string& method, const std::string& path, const std::string& body) -> HttpResponse;
    auto create_session(const nlohmann::json& body) -> HttpResponse;
    auto run_task(const std::string& id, const std::string& task, const nlohmann::json& body) -> HttpResponse;
    auto evaluate(const std::string& id, const nlohmann::json& body) -> HttpResponse;
    auto export_zip(const std::string& id) -> HttpResponse;

    ServiceConfig _cfg;
    pipeline::PromptTemplates _prompts;
    std::shared_ptr<pid::SparqlTransport> _transport;
    std::shared_ptr<llm::Backend> _shared_backend;
    std::mutex _slots_mutex;
    std::map<std::string, std::shared_ptr<Slot>> _slots;
};

/// Stateless shapes plus data validation, as served by POST /validate.
auto validation_report(const std::string& shapes_turtle, const std::string& data_turtle) -> nlohmann::json;

/// Export bundle: one zip entry per present artifact plus provenance.json.
auto export_bundle(const pipeline::ArtifactSet& artifacts) -> std::string;

/// Binds and serves until stop() or a signal. Throws on bind failure.
class HttpServer
{
  public:
    explicit HttpServer(Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    auto operator=(const HttpServer&) -> HttpServer& = delete;

    /// Binds host:port; port 0 picks a free port. Returns the bound port.
    auto bind(const std::string& host, int port) -> int;
    /// Blocks until stop().
    void listen();
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> _impl;
};

} // namespace fairds::service
