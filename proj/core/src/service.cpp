#include "pitplot/service.hpp"

#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "httplib.h"
#include "pitplot/analysis.hpp"
#include "pitplot/io.hpp"
#include "pitplot/report.hpp"
#include "pitplot/rng.hpp"
#include "pitplot/tornado.hpp"

namespace pitplot {

using nlohmann::json;

namespace {

HttpResponse json_response(int status, const json& body) { return {status, body.dump(), "application/json"}; }

HttpResponse error_response(int status, std::string_view message, const std::vector<Diagnostic>& diagnostics = {}) {
    json diags = json::array();
    for (const auto& d : diagnostics) {
        diags.push_back({{"project_id", d.project_id}, {"field", d.field}, {"message", d.message}});
    }
    return json_response(status, {{"error", message}, {"diagnostics", diags}});
}

json parse_body(std::string_view body) {
    if (body.empty()) return json::object();
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw ValidationError("", "body", fmt::format("malformed JSON: {}", e.what()));
    }
}

MetricDef request_metric(const json& request) {
    if (!request.is_object()) throw ValidationError("", "body", "expected a JSON object");
    if (!request.contains("metric")) return pi_metric();
    if (!request.at("metric").is_string()) throw ValidationError("", "metric", "expected a string");
    return metric_by_name(request.at("metric").get<std::string>());
}

std::uint64_t hash_json(const json& doc) { return fnv1a64(doc.dump()); }

json with_echo(json body, const SimConfig& config) {
    body["engine"] = std::string(to_string(config.engine));
    body["seed"] = config.seed;
    body["config"] = to_json(config);
    return body;
}

} // namespace

Service::Service(SimConfig config) {
    validate_config(config);
    state_.config = config;
    state_.config_hash = hash_json(to_json(config));
}

Service::Service(ValidatedPortfolio portfolio, SimConfig config) : Service(config) {
    state_.portfolio_hash = hash_json(to_json(portfolio.spec()));
    state_.portfolio = std::move(portfolio);
}

Service::State Service::snapshot() const {
    std::shared_lock lock(state_mutex_);
    return state_;
}

std::size_t Service::cache_size() const {
    std::lock_guard lock(cache_mutex_);
    return cache_.size();
}

HttpResponse Service::handle(std::string_view method, std::string_view path, std::string_view body) {
    try {
        if (path == "/api/health") {
            if (method != "GET") return error_response(405, "method not allowed");
            return json_response(200, {{"status", "ok"}, {"version", kServiceVersion}});
        }
        if (path == "/api/portfolio") {
            if (method == "GET") return get_portfolio();
            if (method == "PUT") return put_portfolio(body);
            return error_response(405, "method not allowed");
        }
        if (path == "/api/config") {
            if (method == "GET") return json_response(200, to_json(snapshot().config));
            if (method == "PUT") return put_config(body);
            return error_response(405, "method not allowed");
        }
        if (path == "/api/pit" || path == "/api/whatif" || path == "/api/tornado") {
            if (method != "POST") return error_response(405, "method not allowed");
            if (path == "/api/pit") return post_pit(body);
            if (path == "/api/whatif") return post_whatif(body);
            return post_tornado(body);
        }
        return error_response(404, fmt::format("no such endpoint: {}", path));
    } catch (const ValidationError& e) {
        return error_response(400, e.what(), e.diagnostics());
    } catch (const NotFoundError& e) {
        return error_response(404, e.what());
    } catch (const DomainError& e) {
        return error_response(422, e.what());
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
}

HttpResponse Service::get_portfolio() const {
    auto state = snapshot();
    if (!state.portfolio) return error_response(404, "no portfolio loaded");
    return json_response(200, to_json(state.portfolio->spec()));
}

HttpResponse Service::put_portfolio(std::string_view body) {
    auto portfolio = validate_portfolio(parse_portfolio(parse_body(body)));
    const auto hash = hash_json(to_json(portfolio.spec()));
    const auto count = portfolio.size();
    {
        std::unique_lock lock(state_mutex_);
        state_.portfolio = std::move(portfolio);
        state_.portfolio_hash = hash;
    }
    {
        std::lock_guard lock(cache_mutex_);
        cache_.clear();
    }
    return json_response(200, {{"status", "ok"}, {"projects", count}});
}

HttpResponse Service::put_config(std::string_view body) {
    const auto doc = parse_body(body);
    SimConfig config;
    {
        std::shared_lock lock(state_mutex_);
        config = state_.config;
    }
    config = parse_config(doc, config);
    validate_config(config);
    {
        std::unique_lock lock(state_mutex_);
        state_.config = config;
        state_.config_hash = hash_json(to_json(config));
    }
    {
        std::lock_guard lock(cache_mutex_);
        cache_.clear();
    }
    return json_response(200, to_json(config));
}

PitData Service::baseline_pit(const State& state, const MetricDef& metric) {
    CacheKey key{state.portfolio_hash, state.config_hash, metric.name};
    {
        std::lock_guard lock(cache_mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    auto pit = analyze_pit(*state.portfolio, state.config, metric);
    {
        // Only cache results for the state that is still current.
        std::shared_lock state_lock(state_mutex_);
        std::lock_guard lock(cache_mutex_);
        if (state_.portfolio_hash == state.portfolio_hash && state_.config_hash == state.config_hash) {
            cache_.emplace(key, pit);
        }
    }
    return pit;
}

HttpResponse Service::post_pit(std::string_view body) {
    const auto request = parse_body(body);
    const auto metric = request_metric(request);
    const auto state = snapshot();
    if (!state.portfolio) return error_response(404, "no portfolio loaded");
    return json_response(200, with_echo(to_json(baseline_pit(state, metric)), state.config));
}

HttpResponse Service::post_whatif(std::string_view body) {
    auto request = parse_body(body);
    const auto metric = request_metric(request);
    const json& spec = request.contains("whatif") ? request.at("whatif") : request;
    json whatif_doc = json::object();
    for (const char* key : {"exclusions", "forced_success", "overrides"}) {
        if (spec.contains(key)) whatif_doc[key] = spec.at(key);
    }
    const auto whatif = parse_whatif(whatif_doc);
    const auto state = snapshot();
    if (!state.portfolio) return error_response(404, "no portfolio loaded");

    const auto baseline = baseline_pit(state, metric);
    const auto scenario_portfolio = apply_whatif(*state.portfolio, whatif);
    PitData scenario;
    try {
        scenario = analyze_pit(scenario_portfolio, state.config, metric);
    } catch (const DomainError& e) {
        return error_response(422, fmt::format("scenario: {}", e.what()));
    }
    auto out = whatif_to_json(baseline, scenario);
    out["whatif"] = to_json(whatif);
    return json_response(200, with_echo(std::move(out), state.config));
}

HttpResponse Service::post_tornado(std::string_view body) {
    const auto request = parse_body(body);
    const auto metric = request_metric(request);
    if (!request.contains("perturbations") || !request.at("perturbations").is_array()) {
        throw ValidationError("", "perturbations", "expected an array");
    }
    std::vector<Perturbation> perturbations;
    std::vector<Diagnostic> problems;
    const auto& items = request.at("perturbations");
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& p = items[i];
        const bool ok = p.is_object() && p.contains("project_id") && p.at("project_id").is_string() &&
                        p.contains("field") && p.at("field").is_string() && p.contains("low") &&
                        p.at("low").is_number() && p.contains("high") && p.at("high").is_number();
        if (!ok) {
            problems.push_back({"", fmt::format("perturbations[{}]", i),
                                "expected {project_id: string, field: string, low: number, high: number}"});
            continue;
        }
        perturbations.push_back({p.at("project_id").get<std::string>(), p.at("field").get<std::string>(),
                                 p.at("low").get<double>(), p.at("high").get<double>()});
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
    const auto state = snapshot();
    if (!state.portfolio) return error_response(404, "no portfolio loaded");

    const auto rows = portfolio_tornado(*state.portfolio, state.config, metric, perturbations);
    return json_response(200, with_echo({{"metric", metric.name}, {"rows", to_json(rows)}}, state.config));
}

void Service::save_state(const std::filesystem::path& path) const {
    const auto state = snapshot();
    json doc = {{"config", to_json(state.config)}};
    if (state.portfolio) doc["portfolio"] = to_json(state.portfolio->spec());
    write_text_file(path, doc.dump(2) + "\n");
}

void Service::load_state(const std::filesystem::path& path) {
    const auto doc = read_json_file(path);
    if (!doc.is_object()) throw ValidationError("", path.string(), "state file must be an object");
    SimConfig config = doc.contains("config") ? parse_config(doc.at("config")) : SimConfig{};
    validate_config(config);
    std::optional<ValidatedPortfolio> portfolio;
    if (doc.contains("portfolio")) portfolio = validate_portfolio(parse_portfolio(doc.at("portfolio")));
    {
        std::unique_lock lock(state_mutex_);
        state_.config = config;
        state_.config_hash = hash_json(to_json(config));
        state_.portfolio = std::move(portfolio);
        state_.portfolio_hash = state_.portfolio ? hash_json(to_json(state_.portfolio->spec())) : 0;
    }
    std::lock_guard lock(cache_mutex_);
    cache_.clear();
}

struct HttpServer::Impl {
    Service& service;
    ServeOptions options;
    httplib::Server server;
    std::thread listener;
    int port = 0;

    Impl(Service& s, ServeOptions o) : service(s), options(std::move(o)) {}

    void configure() {
        auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
            auto reply = service.handle(req.method, req.path, req.body);
            res.status = reply.status;
            res.set_content(reply.body, reply.content_type);
        };
        server.Get(R"(/api/.*)", dispatch);
        server.Put(R"(/api/.*)", dispatch);
        server.Post(R"(/api/.*)", dispatch);
        server.Delete(R"(/api/.*)", dispatch);
        if (options.cors_origin) {
            server.set_default_headers({{"Access-Control-Allow-Origin", *options.cors_origin},
                                        {"Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS"},
                                        {"Access-Control-Allow-Headers", "Content-Type"}});
            server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        }
        if (options.static_dir && !server.set_mount_point("/", options.static_dir->string())) {
            throw IoError(fmt::format("static directory '{}' does not exist", options.static_dir->string()));
        }
    }

    void bind() {
        configure();
        if (options.port == 0) {
            port = server.bind_to_any_port(options.host);
        } else {
            port = server.bind_to_port(options.host, options.port) ? options.port : -1;
        }
        if (port <= 0) throw IoError(fmt::format("cannot bind {}:{}", options.host, options.port));
    }
};

HttpServer::HttpServer(Service& service, ServeOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start() {
    impl_->bind();
    impl_->listener = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return impl_->port;
}

int HttpServer::run() {
    impl_->bind();
    impl_->server.listen_after_bind();
    return impl_->port;
}

void HttpServer::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->listener.joinable()) impl_->listener.join();
}

} // namespace pitplot
