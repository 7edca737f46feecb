#include "pitplot/tornado.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "pitplot/analysis.hpp"

namespace pitplot {

namespace {

double evaluate_scenario(const ScenarioModel& model, const ScenarioValues& values,
                         std::string_view variable, std::string_view scenario) {
    auto context = [&](const char* what) {
        return fmt::format("model evaluation failed for variable '{}' at {} scenario: {}", variable,
                           scenario, what);
    };
    try {
        return model(values);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(variable), std::string(scenario), context(e.what()));
    } catch (const NotFoundError& e) {
        throw NotFoundError(context(e.what()));
    } catch (const DomainError& e) {
        throw DomainError(context(e.what()));
    } catch (const std::exception& e) {
        throw Error(context(e.what()));
    }
}

} // namespace

std::vector<TornadoRow> tornado_analysis(const ScenarioModel& model,
                                         std::span<const ScenarioVariable> variables) {
    if (variables.empty()) throw ValidationError("", "variables", "tornado needs at least one variable");

    std::vector<Diagnostic> problems;
    std::set<std::string, std::less<>> names;
    ScenarioValues base_values;
    for (const auto& v : variables) {
        if (!names.insert(v.name).second) problems.push_back({"", v.name, "duplicate variable name"});
        if (!(v.low <= v.base && v.base <= v.high)) {
            problems.push_back({"", v.name,
                                fmt::format("requires low <= base <= high, got {} / {} / {}", v.low, v.base,
                                            v.high)});
        }
        base_values[v.name] = v.base;
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));

    const double base = evaluate_scenario(model, base_values, "(all)", "base");

    std::vector<TornadoRow> rows;
    rows.reserve(variables.size());
    for (const auto& v : variables) {
        auto values = base_values;
        values[v.name] = v.low;
        const double low = evaluate_scenario(model, values, v.name, "low");
        values[v.name] = v.high;
        const double high = evaluate_scenario(model, values, v.name, "high");
        const double span = std::max({low, base, high}) - std::min({low, base, high});
        rows.push_back({v.name, low, base, high, span});
    }
    std::sort(rows.begin(), rows.end(), [](const TornadoRow& a, const TornadoRow& b) {
        if (a.span != b.span) return a.span > b.span;
        return a.variable_name < b.variable_name;
    });
    return rows;
}

double ProductSumModel::operator()(const ScenarioValues& values) const {
    double total = 0.0;
    for (const auto& term : terms) {
        double product = 1.0;
        for (const auto& name : term) {
            auto it = values.find(name);
            if (it == values.end()) {
                throw ValidationError("", name, "model references an undefined variable");
            }
            product *= it->second;
        }
        total += product;
    }
    return total;
}

std::vector<TornadoRow> run_scenario(const TornadoScenario& scenario) {
    return tornado_analysis(scenario.model, scenario.variables);
}

std::vector<TornadoRow> portfolio_tornado(const ValidatedPortfolio& portfolio,
                                          const SimConfig& config, const MetricDef& metric,
                                          std::span<const Perturbation> perturbations) {
    struct Target {
        std::size_t project_index;
        std::string field_path;
    };
    std::map<std::string, Target, std::less<>> targets;
    std::vector<ScenarioVariable> variables;
    const auto& projects = portfolio.projects();

    for (const auto& p : perturbations) {
        auto it = std::find_if(projects.begin(), projects.end(),
                               [&](const ProjectSpec& s) { return s.id == p.project_id; });
        if (it == projects.end()) {
            throw NotFoundError(fmt::format("unknown project id '{}' in perturbation", p.project_id));
        }
        const double base = get_field(*it, p.field_path);
        auto name = p.project_id + "." + p.field_path;
        targets[name] = {static_cast<std::size_t>(it - projects.begin()), p.field_path};
        variables.push_back({std::move(name), p.low, base, p.high});
    }

    auto model = [&](const ScenarioValues& values) {
        PortfolioSpec spec = portfolio.spec();
        for (const auto& [name, value] : values) {
            const auto& target = targets.at(name);
            set_field(spec.projects[target.project_index], target.field_path, value);
        }
        return portfolio_metric(validate_portfolio(std::move(spec)), config, metric);
    };
    return tornado_analysis(model, variables);
}

} // namespace pitplot
