#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <tuple>

#include "pitplot/metrics.hpp"
#include "pitplot/model.hpp"

namespace pitplot {

inline constexpr std::string_view kServiceVersion = "0.1.0";

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// In-memory analysis session behind the HTTP API. Transport-independent:
/// handle() maps (method, path, body) to a response and is safe to call from
/// concurrent request threads.
class Service {
public:
    explicit Service(SimConfig config = {});
    Service(ValidatedPortfolio portfolio, SimConfig config);

    HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

    /// Stored portfolio and config as one JSON document.
    void save_state(const std::filesystem::path& path) const;
    void load_state(const std::filesystem::path& path);

    std::size_t cache_size() const;

private:
    struct State {
        std::optional<ValidatedPortfolio> portfolio;
        SimConfig config;
        std::uint64_t portfolio_hash = 0;
        std::uint64_t config_hash = 0;
    };
    using CacheKey = std::tuple<std::uint64_t, std::uint64_t, std::string>;

    State snapshot() const;
    PitData baseline_pit(const State& state, const MetricDef& metric);

    HttpResponse get_portfolio() const;
    HttpResponse put_portfolio(std::string_view body);
    HttpResponse put_config(std::string_view body);
    HttpResponse post_pit(std::string_view body);
    HttpResponse post_whatif(std::string_view body);
    HttpResponse post_tornado(std::string_view body);

    mutable std::shared_mutex state_mutex_;
    State state_;
    mutable std::mutex cache_mutex_;
    std::map<CacheKey, PitData> cache_;
};

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8080; // 0 binds an ephemeral port
    std::optional<std::filesystem::path> static_dir;
    std::optional<std::string> cors_origin;
};

/// HTTP/1.1 server bound to a Service. start() returns once the socket is
/// listening; stop() joins the listener.
class HttpServer {
public:
    HttpServer(Service& service, ServeOptions options);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Returns the bound port. Throws IoError if binding fails.
    int start();
    /// Blocks serving requests on the calling thread until stop().
    int run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace pitplot
