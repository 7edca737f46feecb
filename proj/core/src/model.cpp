#include "pitplot/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace pitplot {

std::string Diagnostic::to_string() const {
    std::string out;
    if (!project_id.empty()) out += "project " + project_id + ": ";
    if (!field.empty()) out += field + ": ";
    out += message;
    return out;
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics) {
    std::string out = "validation failed";
    for (const auto& d : diagnostics) out += "\n  " + d.to_string();
    return out;
}

constexpr std::array<std::string_view, 4> kPhaseNames = {"Ph1", "Ph2", "Ph3", "Reg"};

} // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

ValidationError::ValidationError(std::string project_id, std::string field, std::string message)
    : ValidationError(std::vector<Diagnostic>{
          Diagnostic{std::move(project_id), std::move(field), std::move(message)}}) {}

std::string_view to_string(PhaseId phase) { return kPhaseNames[static_cast<std::size_t>(phase)]; }

std::optional<PhaseId> parse_phase_id(std::string_view text) {
    for (std::size_t i = 0; i < kPhaseNames.size(); ++i) {
        if (kPhaseNames[i] == text) return static_cast<PhaseId>(i);
    }
    return std::nullopt;
}

std::string_view to_string(EngineKind engine) {
    return engine == EngineKind::analytic ? "analytic" : "monte_carlo";
}

std::optional<EngineKind> parse_engine_kind(std::string_view text) {
    if (text == "analytic") return EngineKind::analytic;
    if (text == "monte_carlo" || text == "mc") return EngineKind::monte_carlo;
    return std::nullopt;
}

int ProjectSpec::development_years() const {
    int years = 0;
    for (const auto& p : phases) years += p.duration_years;
    return years;
}

double ProjectSpec::success_prob() const {
    double prob = 1.0;
    for (const auto& p : phases) prob *= p.success_prob;
    return prob;
}

const PhaseSpec* ProjectSpec::find_phase(PhaseId phase) const {
    auto it = std::find_if(phases.begin(), phases.end(),
                           [phase](const PhaseSpec& p) { return p.phase == phase; });
    return it == phases.end() ? nullptr : &*it;
}

const ProjectSpec* PortfolioSpec::find(std::string_view id) const {
    auto it = std::find_if(projects.begin(), projects.end(),
                           [id](const ProjectSpec& p) { return p.id == id; });
    return it == projects.end() ? nullptr : &*it;
}

std::vector<Diagnostic> check_portfolio(const PortfolioSpec& spec) {
    std::vector<Diagnostic> out;
    if (spec.projects.empty()) out.push_back({"", "projects", "portfolio has no projects"});

    std::set<std::string, std::less<>> seen;
    for (std::size_t i = 0; i < spec.projects.size(); ++i) {
        const auto& project = spec.projects[i];
        const std::string id = project.id.empty() ? fmt::format("#{}", i + 1) : project.id;
        if (project.id.empty()) out.push_back({id, "id", "empty id"});
        if (!seen.insert(project.id).second) out.push_back({id, "id", "duplicate id"});

        if (!std::isfinite(project.peak_sales) || project.peak_sales < 0.0) {
            out.push_back({id, "peak_sales", fmt::format("must be >= 0, got {}", project.peak_sales)});
        }
        if (project.phases.empty()) {
            out.push_back({id, "phases", "empty phase list"});
            continue;
        }
        for (std::size_t h = 0; h < project.phases.size(); ++h) {
            const auto& phase = project.phases[h];
            const std::string where = fmt::format("phases.{}", to_string(phase.phase));
            if (h > 0 && phase.phase <= project.phases[h - 1].phase) {
                out.push_back({id, where,
                               fmt::format("phase order violation: {} after {}", to_string(phase.phase),
                                           to_string(project.phases[h - 1].phase))});
            }
            if (phase.duration_years < 1) {
                out.push_back({id, where + ".duration",
                               fmt::format("must be >= 1 year, got {}", phase.duration_years)});
            }
            if (!std::isfinite(phase.cost_total) || phase.cost_total < 0.0) {
                out.push_back({id, where + ".cost", fmt::format("must be >= 0, got {}", phase.cost_total)});
            }
            if (!(phase.success_prob > 0.0 && phase.success_prob <= 1.0)) {
                out.push_back({id, where + ".pos",
                               fmt::format("probability must be in (0, 1], got {}", phase.success_prob)});
            }
        }
        if (project.phases.back().phase != PhaseId::reg) {
            out.push_back({id, "phases", "last remaining phase must be Reg"});
        }
    }
    return out;
}

std::vector<Diagnostic> check_config(const SimConfig& config) {
    std::vector<Diagnostic> out;
    if (config.iterations < 1) out.push_back({"", "iterations", "must be >= 1"});
    if (!std::isfinite(config.discount_rate) || config.discount_rate < 0.0) {
        out.push_back({"", "discount_rate", fmt::format("must be >= 0, got {}", config.discount_rate)});
    }
    if (config.market_years < 0) out.push_back({"", "market_years", "must be >= 0"});
    if (config.ramp_years < 0) out.push_back({"", "ramp_years", "must be >= 0"});
    if (config.ramp_years > config.market_years) {
        out.push_back({"", "ramp_years", "must not exceed market_years"});
    }
    return out;
}

ValidatedPortfolio validate_portfolio(PortfolioSpec spec) {
    auto diagnostics = check_portfolio(spec);
    if (!diagnostics.empty()) throw ValidationError(std::move(diagnostics));
    return ValidatedPortfolio(std::move(spec));
}

void validate_config(const SimConfig& config) {
    auto diagnostics = check_config(config);
    if (!diagnostics.empty()) throw ValidationError(std::move(diagnostics));
}

namespace {

struct FieldRef {
    enum class Kind { peak_sales, duration, cost, pos } kind;
    PhaseId phase = PhaseId::reg;
};

FieldRef resolve(const ProjectSpec& project, std::string_view path) {
    if (path == "peak_sales") return {FieldRef::Kind::peak_sales};

    auto bad = [&](std::string message) {
        return ValidationError(project.id, std::string(path), std::move(message));
    };
    constexpr std::string_view prefix = "phases.";
    if (!path.starts_with(prefix)) throw bad("unknown field path");
    auto rest = path.substr(prefix.size());
    auto dot = rest.find('.');
    if (dot == std::string_view::npos) throw bad("unknown field path");
    auto phase = parse_phase_id(rest.substr(0, dot));
    if (!phase) throw bad("unknown phase");
    if (!project.find_phase(*phase)) throw bad("project has no such remaining phase");
    auto leaf = rest.substr(dot + 1);
    if (leaf == "duration") return {FieldRef::Kind::duration, *phase};
    if (leaf == "cost") return {FieldRef::Kind::cost, *phase};
    if (leaf == "pos") return {FieldRef::Kind::pos, *phase};
    throw bad("unknown phase field");
}

} // namespace

double get_field(const ProjectSpec& project, std::string_view path) {
    auto ref = resolve(project, path);
    if (ref.kind == FieldRef::Kind::peak_sales) return project.peak_sales;
    const auto& phase = *project.find_phase(ref.phase);
    switch (ref.kind) {
    case FieldRef::Kind::duration: return phase.duration_years;
    case FieldRef::Kind::cost: return phase.cost_total;
    default: return phase.success_prob;
    }
}

void set_field(ProjectSpec& project, std::string_view path, double value) {
    auto ref = resolve(project, path);
    if (ref.kind == FieldRef::Kind::peak_sales) {
        project.peak_sales = value;
        return;
    }
    auto& phase = *std::find_if(project.phases.begin(), project.phases.end(),
                                [&](const PhaseSpec& p) { return p.phase == ref.phase; });
    switch (ref.kind) {
    case FieldRef::Kind::duration:
        if (!std::isfinite(value) || value != std::floor(value) || std::abs(value) > 1e6) {
            throw ValidationError(project.id, std::string(path),
                                  fmt::format("duration must be a whole number of years, got {}", value));
        }
        phase.duration_years = static_cast<int>(value);
        break;
    case FieldRef::Kind::cost: phase.cost_total = value; break;
    default: phase.success_prob = value; break;
    }
}

} // namespace pitplot
