// pitplot: PIT-plot and tornado analyses of phase-gated project portfolios.
//
// Exit codes: 0 ok, 2 validation/usage error, 3 computation error, 4 I/O error.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "pitplot/analysis.hpp"
#include "pitplot/io.hpp"
#include "pitplot/render.hpp"
#include "pitplot/report.hpp"
#include "pitplot/service.hpp"
#include "pitplot/tornado.hpp"
#include "pitplot/whatif.hpp"

namespace fs = std::filesystem;
using namespace pitplot;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitComputation = 3;
constexpr int kExitIo = 4;

// Error annotated with the file or flag it came from.
struct CliError {
    int code;
    std::string message;
};

std::string describe(const ValidationError& e) {
    std::string out;
    for (const auto& d : e.diagnostics()) out += "\n  " + d.to_string();
    return out;
}

template <typename F>
auto with_context(const std::string& context, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ValidationError& e) {
        throw CliError{kExitValidation, fmt::format("invalid {}:{}", context, describe(e))};
    } catch (const NotFoundError& e) {
        throw CliError{kExitValidation, fmt::format("{}: {}", context, e.what())};
    } catch (const IoError& e) {
        throw CliError{kExitIo, fmt::format("{}: {}", context, e.what())};
    } catch (const DomainError& e) {
        throw CliError{kExitComputation, fmt::format("{}: {}", context, e.what())};
    }
}

struct CommonOptions {
    std::string portfolio_path;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> iterations;
    std::optional<std::string> engine;
    std::optional<double> discount_rate;
    std::optional<int> market_years;
    std::optional<int> ramp_years;
    std::string metric = "pi";
    std::string format;
    std::string out_path;

    void add_config_flags(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Simulation config file (JSON)");
        cmd->add_option("--seed", seed, "Random seed (overrides config)");
        cmd->add_option("--iterations", iterations, "Monte Carlo iterations J")->check(CLI::PositiveNumber);
        cmd->add_option("--engine", engine, "monte_carlo or analytic")
            ->check(CLI::IsMember({"monte_carlo", "mc", "analytic"}));
        cmd->add_option("--discount-rate", discount_rate, "Annual discount rate q");
        cmd->add_option("--market-years", market_years, "Years of revenue after launch");
        cmd->add_option("--ramp-years", ramp_years, "Linear ramp to peak sales");
    }

    void add_output_flags(CLI::App* cmd, std::vector<std::string> formats, std::string fallback) {
        format = std::move(fallback);
        cmd->add_option("--format", format, "Output format")->check(CLI::IsMember(formats));
        cmd->add_option("--out", out_path, "Write output to this file instead of stdout");
    }

    void add_metric_flag(CLI::App* cmd) {
        cmd->add_option("--metric", metric, "Portfolio metric")->check(CLI::IsMember({"pi", "enpv"}));
    }

    // Built-in defaults < config file < flags.
    SimConfig config() const {
        SimConfig c;
        if (!config_path.empty()) {
            c = with_context(fmt::format("config file '{}'", config_path), [&] { return load_config(config_path); });
        }
        if (seed) c.seed = *seed;
        if (iterations) c.iterations = *iterations;
        if (engine) c.engine = *parse_engine_kind(*engine);
        if (discount_rate) c.discount_rate = *discount_rate;
        if (market_years) c.market_years = *market_years;
        if (ramp_years) c.ramp_years = *ramp_years;
        with_context("simulation config", [&] { validate_config(c); });
        return c;
    }

    ValidatedPortfolio portfolio() const {
        return with_context(fmt::format("portfolio file '{}'", portfolio_path),
                            [&] { return validate_portfolio(load_portfolio(portfolio_path)); });
    }

    void emit(const std::string& text) const {
        if (out_path.empty()) {
            std::cout << text;
            std::cout.flush();
            return;
        }
        with_context(fmt::format("output file '{}'", out_path), [&] { write_text_file(out_path, text); });
    }
};

int cmd_validate(const CommonOptions& opt) {
    const auto portfolio = opt.portfolio();
    std::cout << fmt::format("valid: portfolio '{}' with {} projects\n", portfolio.name(), portfolio.size());
    return 0;
}

int cmd_simulate(const CommonOptions& opt, const std::string& ledger_path) {
    const auto portfolio = opt.portfolio();
    auto config = opt.config();
    if (!ledger_path.empty()) {
        if (config.engine != EngineKind::monte_carlo) {
            throw CliError{kExitValidation, "--ledger requires --engine monte_carlo"};
        }
        const auto sets = simulate_portfolio(portfolio, config);
        std::ostringstream ledger;
        write_ledger_csv(ledger, sets);
        with_context(fmt::format("ledger file '{}'", ledger_path), [&] { write_text_file(ledger_path, ledger.str()); });
    }
    const auto reports = project_reports(portfolio, config);
    std::ostringstream out;
    if (opt.format == "json") {
        out << nlohmann::json{{"config", to_json(config)}, {"projects", to_json(reports)}}.dump(2) << '\n';
    } else if (opt.format == "text") {
        out << fmt::format("engine: {}  iterations: {}  seed: {}  discount_rate: {}\n", to_string(config.engine),
                           config.iterations, config.seed, config.discount_rate);
        out << fmt::format("{:<10} {:>14} {:>14} {:>10} {:>14} {:>14}\n", "project", "revenue", "cost", "success",
                           "cond_revenue", "cond_cost");
        for (const auto& r : reports) {
            out << fmt::format("{:<10} {:>14.4f} {:>14.4f} {:>10.4f} {:>14.4f} {:>14.4f}\n", r.project_id, r.revenue,
                               r.cost, r.success_fraction, r.conditional_revenue.value_or(0.0),
                               r.conditional_cost.value_or(0.0));
        }
    } else {
        write_project_csv(out, reports);
    }
    opt.emit(out.str());
    return 0;
}

std::string format_pit(const PitData& pit, const std::string& format) {
    if (format == "svg") return render_pit(pit);
    if (format == "json") return to_json(pit).dump(2) + "\n";
    if (format == "csv") {
        std::ostringstream out;
        write_pit_csv(out, pit);
        return out.str();
    }
    return render_text(pit);
}

int cmd_pit(const CommonOptions& opt, const std::string& svg_path) {
    const auto portfolio = opt.portfolio();
    const auto config = opt.config();
    const auto metric = metric_by_name(opt.metric);
    const auto pit = with_context("PIT computation", [&] { return analyze_pit(portfolio, config, metric); });
    if (!svg_path.empty()) {
        with_context(fmt::format("SVG file '{}'", svg_path), [&] { write_text_file(svg_path, render_pit(pit)); });
    }
    opt.emit(format_pit(pit, opt.format));
    return 0;
}

Perturbation parse_perturbation(const std::string& text) {
    // ID:field.path:low:high
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 4) {
        throw CliError{kExitValidation, fmt::format("--perturb '{}': expected ID:field.path:low:high", text)};
    }
    try {
        std::size_t used_low = 0, used_high = 0;
        const double low = std::stod(parts[2], &used_low);
        const double high = std::stod(parts[3], &used_high);
        if (used_low != parts[2].size() || used_high != parts[3].size()) throw std::invalid_argument("trailing");
        return {parts[0], parts[1], low, high};
    } catch (const std::exception&) {
        throw CliError{kExitValidation, fmt::format("--perturb '{}': low/high must be numbers", text)};
    }
}

int cmd_tornado(const CommonOptions& opt, const std::vector<std::string>& perturb_flags) {
    const auto doc = with_context(fmt::format("tornado file '{}'", opt.portfolio_path),
                                  [&] { return read_json_file(opt.portfolio_path); });
    std::vector<TornadoRow> rows;
    std::string outcome_name;
    if (doc.is_object() && doc.contains("variables")) {
        if (!perturb_flags.empty()) {
            throw CliError{kExitValidation, "--perturb applies to portfolio files, not scenario files"};
        }
        const auto scenario = with_context(fmt::format("tornado file '{}'", opt.portfolio_path),
                                           [&] { return parse_tornado_scenario(doc); });
        outcome_name = scenario.outcome_name;
        rows = with_context("tornado analysis", [&] { return run_scenario(scenario); });
    } else {
        if (perturb_flags.empty()) {
            throw CliError{kExitValidation, "portfolio tornado needs at least one --perturb ID:field:low:high"};
        }
        const auto portfolio = opt.portfolio();
        const auto config = opt.config();
        const auto metric = metric_by_name(opt.metric);
        std::vector<Perturbation> perturbations;
        for (const auto& p : perturb_flags) perturbations.push_back(parse_perturbation(p));
        outcome_name = metric.name;
        rows = with_context("tornado analysis",
                            [&] { return portfolio_tornado(portfolio, config, metric, perturbations); });
    }

    std::ostringstream out;
    if (opt.format == "svg") {
        out << render_tornado(rows, {}, outcome_name);
    } else if (opt.format == "json") {
        out << nlohmann::json{{"outcome", outcome_name}, {"rows", to_json(rows)}}.dump(2) << '\n';
    } else if (opt.format == "csv") {
        write_tornado_csv(out, rows);
    } else {
        out << render_text(rows, outcome_name);
    }
    opt.emit(out.str());
    return 0;
}

int cmd_whatif(const CommonOptions& opt, const std::vector<std::string>& exclude,
               const std::vector<std::string>& force, const std::vector<std::string>& sets) {
    WhatIf whatif;
    whatif.exclusions.insert(exclude.begin(), exclude.end());
    whatif.forced_success.insert(force.begin(), force.end());
    for (const auto& id : whatif.exclusions) {
        if (whatif.forced_success.contains(id)) {
            throw CliError{kExitValidation, fmt::format("project '{}' is both excluded and forced to succeed", id)};
        }
    }
    for (const auto& s : sets) whatif.overrides.push_back(with_context("--set", [&] { return parse_override(s); }));

    const auto portfolio = opt.portfolio();
    const auto config = opt.config();
    const auto metric = metric_by_name(opt.metric);
    const auto scenario = with_context("what-if scenario", [&] { return apply_whatif(portfolio, whatif); });
    const auto baseline_pit = with_context("baseline PIT", [&] { return analyze_pit(portfolio, config, metric); });
    const auto scenario_pit = with_context("scenario PIT", [&] { return analyze_pit(scenario, config, metric); });

    std::ostringstream out;
    if (opt.format == "json") {
        auto doc = whatif_to_json(baseline_pit, scenario_pit);
        doc["whatif"] = to_json(whatif);
        doc["config"] = to_json(config);
        out << doc.dump(2) << '\n';
    } else if (opt.format == "csv") {
        write_whatif_csv(out, baseline_pit, scenario_pit);
    } else {
        out << "== baseline\n" << render_text(baseline_pit) << "\n== scenario\n" << render_text(scenario_pit);
        out << fmt::format("\ncenter change: {:+.4f} ({:.4f} -> {:.4f})\n",
                           scenario_pit.center_value - baseline_pit.center_value, baseline_pit.center_value,
                           scenario_pit.center_value);
    }
    opt.emit(out.str());
    return 0;
}

int cmd_serve(const CommonOptions& opt, const std::string& bind, const std::string& state_file,
              const std::string& static_dir, const std::string& cors) {
    ServeOptions serve;
    const auto colon = bind.rfind(':');
    try {
        if (colon == std::string::npos) throw std::invalid_argument("no port");
        serve.host = bind.substr(0, colon);
        serve.port = std::stoi(bind.substr(colon + 1));
    } catch (const std::exception&) {
        throw CliError{kExitValidation, fmt::format("--bind '{}': expected HOST:PORT", bind)};
    }
    if (!static_dir.empty()) serve.static_dir = static_dir;
    if (!cors.empty()) serve.cors_origin = cors;

    const auto config = opt.config();
    std::unique_ptr<Service> service;
    if (!opt.portfolio_path.empty()) {
        service = std::make_unique<Service>(opt.portfolio(), config);
    } else {
        service = std::make_unique<Service>(config);
    }
    if (!state_file.empty() && fs::exists(state_file)) {
        with_context(fmt::format("state file '{}'", state_file), [&] { service->load_state(state_file); });
    }

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    HttpServer server(*service, serve);
    const int port = with_context("server", [&] { return server.start(); });
    std::cout << fmt::format("listening on http://{}:{}\n", serve.host, port) << std::flush;

    int received = 0;
    sigwait(&signals, &received);
    server.stop();
    if (!state_file.empty()) {
        with_context(fmt::format("state file '{}'", state_file), [&] { service->save_state(state_file); });
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PIT-plot and tornado analyses for phase-gated project portfolios", "pitplot"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kServiceVersion));

    CommonOptions opt;
    std::string svg_path, ledger_path, bind = "127.0.0.1:8080", state_file, static_dir, cors;
    std::vector<std::string> perturb, exclude, force, sets;

    auto* validate = app.add_subcommand("validate", "Check a portfolio file");
    validate->add_option("portfolio", opt.portfolio_path, "Portfolio file (JSON)")->required();

    auto* simulate = app.add_subcommand("simulate", "Per-project risk-adjusted totals");
    simulate->add_option("portfolio", opt.portfolio_path, "Portfolio file (JSON)")->required();
    opt.add_config_flags(simulate);
    opt.add_output_flags(simulate, {"csv", "json", "text"}, "csv");
    simulate->add_option("--ledger", ledger_path, "Write the raw per-iteration ledger as CSV");

    auto* pit = app.add_subcommand("pit", "Compute a PIT-plot");
    pit->add_option("portfolio", opt.portfolio_path, "Portfolio file (JSON)")->required();
    opt.add_config_flags(pit);
    opt.add_metric_flag(pit);
    opt.add_output_flags(pit, {"svg", "text", "csv", "json"}, "text");
    pit->add_option("--svg", svg_path, "Also write the SVG chart to this file");

    auto* tornado = app.add_subcommand("tornado", "One-at-a-time sensitivity analysis");
    tornado->add_option("file", opt.portfolio_path, "Scenario file, or portfolio file with --perturb")->required();
    tornado->add_option("--perturb", perturb, "ID:field.path:low:high (portfolio files)");
    opt.add_config_flags(tornado);
    opt.add_metric_flag(tornado);
    opt.add_output_flags(tornado, {"svg", "text", "csv", "json"}, "text");

    auto* whatif = app.add_subcommand("whatif", "Compare a what-if scenario against the baseline");
    whatif->add_option("portfolio", opt.portfolio_path, "Portfolio file (JSON)")->required();
    whatif->add_option("--exclude", exclude, "Drop a project (repeatable)");
    whatif->add_option("--force-success", force, "Set every gate probability of a project to 1 (repeatable)");
    whatif->add_option("--set", sets, "Override a field: ID:field.path=value (repeatable)");
    opt.add_config_flags(whatif);
    opt.add_metric_flag(whatif);
    opt.add_output_flags(whatif, {"text", "csv", "json"}, "text");

    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("portfolio", opt.portfolio_path, "Initial portfolio file (JSON)");
    opt.add_config_flags(serve);
    serve->add_option("--bind", bind, "HOST:PORT to listen on");
    serve->add_option("--state-file", state_file, "Load state on start, save on shutdown");
    serve->add_option("--static-dir", static_dir, "Serve UI files from this directory");
    serve->add_option("--cors", cors, "Allowed cross-origin for local UI development");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (validate->parsed()) return cmd_validate(opt);
        if (simulate->parsed()) return cmd_simulate(opt, ledger_path);
        if (pit->parsed()) return cmd_pit(opt, svg_path);
        if (tornado->parsed()) return cmd_tornado(opt, perturb);
        if (whatif->parsed()) return cmd_whatif(opt, exclude, force, sets);
        if (serve->parsed()) return cmd_serve(opt, bind, state_file, static_dir, cors);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << '\n';
        return e.code;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NotFoundError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitComputation;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitComputation;
    }
    return kExitValidation;
}
