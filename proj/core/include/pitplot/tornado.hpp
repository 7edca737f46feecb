#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pitplot/metrics.hpp"
#include "pitplot/model.hpp"

namespace pitplot {

struct ScenarioVariable {
    std::string name;
    double low = 0.0;
    double base = 0.0;
    double high = 0.0;
};

struct TornadoRow {
    std::string variable_name;
    double outcome_low = 0.0;
    double outcome_base = 0.0;
    double outcome_high = 0.0;
    double span = 0.0; // max - min over the three outcomes

    bool operator==(const TornadoRow&) const = default;
};

using ScenarioValues = std::map<std::string, double, std::less<>>;
using ScenarioModel = std::function<double(const ScenarioValues&)>;

/// One-at-a-time sensitivity: each variable moved to low and high with the
/// rest at base. Rows sorted by span descending, then name.
std::vector<TornadoRow> tornado_analysis(const ScenarioModel& model,
                                         std::span<const ScenarioVariable> variables);

/// Model: sum over terms of the product of the named variables, e.g.
/// {{"fixed"}, {"variable", "items"}} = fixed + variable * items.
struct ProductSumModel {
    std::vector<std::vector<std::string>> terms;

    double operator()(const ScenarioValues& values) const;
};

/// A self-contained scenario analysis as stored in tornado files.
struct TornadoScenario {
    std::string name;
    std::string outcome_name;
    ProductSumModel model;
    std::vector<ScenarioVariable> variables;
};

std::vector<TornadoRow> run_scenario(const TornadoScenario& scenario);

/// Perturbation of a numeric project field, see get_field() for paths.
struct Perturbation {
    std::string project_id;
    std::string field_path;
    double low = 0.0;
    double high = 0.0;
};

/// Tornado over a portfolio metric. Variable names are "<id>.<field_path>".
std::vector<TornadoRow> portfolio_tornado(const ValidatedPortfolio& portfolio,
                                          const SimConfig& config, const MetricDef& metric,
                                          std::span<const Perturbation> perturbations);

} // namespace pitplot
