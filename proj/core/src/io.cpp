#include "pitplot/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace pitplot {

using nlohmann::json;

namespace {

// Collects shape/type problems while walking a document.
class Reader {
public:
    std::vector<Diagnostic> diagnostics;

    void fail(std::string_view project, std::string field, std::string message) {
        diagnostics.push_back({std::string(project), std::move(field), std::move(message)});
    }

    const json* member(const json& obj, const char* key, std::string_view project, const std::string& field,
                       bool required = true) {
        if (!obj.is_object()) return nullptr;
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) fail(project, field, "missing required field");
            return nullptr;
        }
        return &*it;
    }

    std::optional<double> number(const json& obj, const char* key, std::string_view project,
                                 const std::string& field, bool required = true) {
        const json* v = member(obj, key, project, field, required);
        if (!v) return std::nullopt;
        if (!v->is_number()) {
            fail(project, field, fmt::format("expected a number, got {}", v->type_name()));
            return std::nullopt;
        }
        return v->get<double>();
    }

    std::optional<std::string> string(const json& obj, const char* key, std::string_view project,
                                      const std::string& field, bool required = true) {
        const json* v = member(obj, key, project, field, required);
        if (!v) return std::nullopt;
        if (!v->is_string()) {
            fail(project, field, fmt::format("expected a string, got {}", v->type_name()));
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::optional<long long> whole(const json& obj, const char* key, std::string_view project,
                                   const std::string& field, bool required = true) {
        auto value = number(obj, key, project, field, required);
        if (!value) return std::nullopt;
        if (!std::isfinite(*value) || *value != std::floor(*value)) {
            fail(project, field, fmt::format("must be a whole number, got {}", *value));
            return std::nullopt;
        }
        if (std::abs(*value) > 1e15) {
            fail(project, field, "value out of range");
            return std::nullopt;
        }
        return static_cast<long long>(*value);
    }

    void finish() {
        if (!diagnostics.empty()) throw ValidationError(std::move(diagnostics));
    }
};

PhaseSpec read_phase(Reader& rd, const json& doc, const std::string& id, std::size_t index) {
    PhaseSpec phase;
    const std::string where = fmt::format("phases[{}]", index);
    if (!doc.is_object()) {
        rd.fail(id, where, "expected an object");
        return phase;
    }
    if (auto name = rd.string(doc, "phase", id, where + ".phase")) {
        if (auto parsed = parse_phase_id(*name)) {
            phase.phase = *parsed;
        } else {
            rd.fail(id, where + ".phase", fmt::format("unknown phase '{}' (expected Ph1, Ph2, Ph3 or Reg)", *name));
        }
    }
    if (auto duration = rd.number(doc, "duration", id, where + ".duration")) {
        if (*duration != std::floor(*duration) || !std::isfinite(*duration)) {
            rd.fail(id, where + ".duration",
                    fmt::format("fractional durations are not supported, got {}", *duration));
        } else if (std::abs(*duration) > 1e6) {
            rd.fail(id, where + ".duration", "value out of range");
        } else {
            phase.duration_years = static_cast<int>(*duration);
        }
    }
    if (auto cost = rd.number(doc, "cost", id, where + ".cost")) phase.cost_total = *cost;
    if (auto pos = rd.number(doc, "pos", id, where + ".pos")) phase.success_prob = *pos;
    return phase;
}

} // namespace

PortfolioSpec parse_portfolio(const json& doc) {
    Reader rd;
    PortfolioSpec spec;
    if (!doc.is_object()) {
        rd.fail("", "", "portfolio document must be an object");
        rd.finish();
    }
    if (auto name = rd.string(doc, "name", "", "name", false)) spec.name = *name;

    const json* projects = rd.member(doc, "projects", "", "projects");
    if (projects && !projects->is_array()) {
        rd.fail("", "projects", "expected an array");
        projects = nullptr;
    }
    if (projects) {
        for (std::size_t i = 0; i < projects->size(); ++i) {
            const json& p = (*projects)[i];
            ProjectSpec project;
            std::string label = fmt::format("projects[{}]", i);
            if (!p.is_object()) {
                rd.fail("", label, "expected an object");
                continue;
            }
            if (auto id = rd.string(p, "id", "", label + ".id")) {
                project.id = *id;
                label = *id;
            }
            project.name = rd.string(p, "name", label, "name", false).value_or(project.id);
            if (auto peak = rd.number(p, "peak_sales", label, "peak_sales")) project.peak_sales = *peak;
            if (const json* phases = rd.member(p, "phases", label, "phases")) {
                if (!phases->is_array()) {
                    rd.fail(label, "phases", "expected an array");
                } else {
                    for (std::size_t h = 0; h < phases->size(); ++h) {
                        project.phases.push_back(read_phase(rd, (*phases)[h], label, h));
                    }
                }
            }
            spec.projects.push_back(std::move(project));
        }
    }
    rd.finish();
    return spec;
}

json to_json(const PortfolioSpec& spec) {
    json projects = json::array();
    for (const auto& p : spec.projects) {
        json phases = json::array();
        for (const auto& h : p.phases) {
            phases.push_back({{"phase", std::string(to_string(h.phase))},
                              {"duration", h.duration_years},
                              {"cost", h.cost_total},
                              {"pos", h.success_prob}});
        }
        projects.push_back({{"id", p.id}, {"name", p.name}, {"peak_sales", p.peak_sales}, {"phases", phases}});
    }
    return {{"name", spec.name}, {"projects", projects}};
}

SimConfig parse_config(const json& doc, SimConfig base) {
    Reader rd;
    if (!doc.is_object()) {
        rd.fail("", "", "config document must be an object");
        rd.finish();
    }
    static const std::set<std::string, std::less<>> known = {"iterations",   "seed",       "discount_rate",
                                                             "market_years", "ramp_years", "engine"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) rd.fail("", key, "unknown config key");
    }
    if (auto v = rd.whole(doc, "iterations", "", "iterations", false)) {
        if (*v < 1) {
            rd.fail("", "iterations", "must be >= 1");
        } else {
            base.iterations = static_cast<std::uint64_t>(*v);
        }
    }
    if (doc.contains("seed")) {
        const json& s = doc.at("seed");
        if (s.is_number_unsigned()) {
            base.seed = s.get<std::uint64_t>();
        } else if (s.is_number_integer() && s.get<long long>() >= 0) {
            base.seed = static_cast<std::uint64_t>(s.get<long long>());
        } else {
            rd.fail("", "seed", "must be a non-negative integer");
        }
    }
    if (auto v = rd.number(doc, "discount_rate", "", "discount_rate", false)) base.discount_rate = *v;
    if (auto v = rd.whole(doc, "market_years", "", "market_years", false)) base.market_years = static_cast<int>(*v);
    if (auto v = rd.whole(doc, "ramp_years", "", "ramp_years", false)) base.ramp_years = static_cast<int>(*v);
    if (auto v = rd.string(doc, "engine", "", "engine", false)) {
        if (auto engine = parse_engine_kind(*v)) {
            base.engine = *engine;
        } else {
            rd.fail("", "engine", fmt::format("unknown engine '{}' (expected monte_carlo or analytic)", *v));
        }
    }
    rd.finish();
    return base;
}

json to_json(const SimConfig& config) {
    return {{"iterations", config.iterations},     {"seed", config.seed},
            {"discount_rate", config.discount_rate}, {"market_years", config.market_years},
            {"ramp_years", config.ramp_years},       {"engine", std::string(to_string(config.engine))}};
}

TornadoScenario parse_tornado_scenario(const json& doc) {
    Reader rd;
    TornadoScenario scenario;
    if (!doc.is_object()) {
        rd.fail("", "", "tornado document must be an object");
        rd.finish();
    }
    scenario.name = rd.string(doc, "name", "", "name", false).value_or("");
    scenario.outcome_name = rd.string(doc, "outcome", "", "outcome", false).value_or("outcome");

    std::set<std::string, std::less<>> declared;
    if (const json* vars = rd.member(doc, "variables", "", "variables")) {
        if (!vars->is_array()) {
            rd.fail("", "variables", "expected an array");
        } else {
            for (std::size_t i = 0; i < vars->size(); ++i) {
                const json& v = (*vars)[i];
                const std::string where = fmt::format("variables[{}]", i);
                if (!v.is_object()) {
                    rd.fail("", where, "expected an object");
                    continue;
                }
                ScenarioVariable var;
                var.name = rd.string(v, "name", "", where + ".name").value_or("");
                var.low = rd.number(v, "low", "", where + ".low").value_or(0.0);
                var.base = rd.number(v, "base", "", where + ".base").value_or(0.0);
                var.high = rd.number(v, "high", "", where + ".high").value_or(0.0);
                declared.insert(var.name);
                scenario.variables.push_back(std::move(var));
            }
        }
    }
    if (const json* model = rd.member(doc, "model", "", "model")) {
        const json* terms = rd.member(*model, "terms", "", "model.terms");
        if (!model->is_object() || (terms && !terms->is_array())) {
            rd.fail("", "model", "expected {\"terms\": [[name, ...], ...]}");
        } else if (terms) {
            for (const auto& term : *terms) {
                std::vector<std::string> names;
                if (!term.is_array()) {
                    rd.fail("", "model.terms", "each term must be an array of variable names");
                    continue;
                }
                for (const auto& name : term) {
                    if (!name.is_string()) {
                        rd.fail("", "model.terms", "variable names must be strings");
                        continue;
                    }
                    if (!declared.contains(name.get<std::string>())) {
                        rd.fail("", "model.terms", fmt::format("undeclared variable '{}'", name.get<std::string>()));
                    }
                    names.push_back(name.get<std::string>());
                }
                scenario.model.terms.push_back(std::move(names));
            }
        }
    }
    rd.finish();
    return scenario;
}

json to_json(const TornadoScenario& scenario) {
    json vars = json::array();
    for (const auto& v : scenario.variables) {
        vars.push_back({{"name", v.name}, {"low", v.low}, {"base", v.base}, {"high", v.high}});
    }
    return {{"name", scenario.name},
            {"outcome", scenario.outcome_name},
            {"model", {{"terms", scenario.model.terms}}},
            {"variables", vars}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot read file '{}'", path.string()));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError(fmt::format("error reading file '{}'", path.string()));
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw ValidationError("", path.string(), fmt::format("malformed JSON: {}", e.what()));
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write file '{}'", path.string()));
    out << text;
    if (!out) throw IoError(fmt::format("error writing file '{}'", path.string()));
}

PortfolioSpec load_portfolio(const std::filesystem::path& path) { return parse_portfolio(read_json_file(path)); }

SimConfig load_config(const std::filesystem::path& path, SimConfig base) {
    return parse_config(read_json_file(path), base);
}

TornadoScenario load_tornado_scenario(const std::filesystem::path& path) {
    return parse_tornado_scenario(read_json_file(path));
}

} // namespace pitplot
