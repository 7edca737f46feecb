#include "pitplot/analysis.hpp"

namespace pitplot {

std::vector<ProjectOutcome> evaluate_outcomes(const ValidatedPortfolio& portfolio,
                                              const SimConfig& config) {
    validate_config(config);
    std::vector<ProjectOutcome> out;
    out.reserve(portfolio.size());
    if (config.engine == EngineKind::analytic) {
        for (const auto& e : analytic_portfolio(portfolio, config)) out.push_back(summarize(e));
    } else {
        for (const auto& cf : simulate_portfolio(portfolio, config)) out.push_back(summarize(cf));
    }
    return out;
}

std::vector<ProjectReport> project_reports(const ValidatedPortfolio& portfolio,
                                           const SimConfig& config) {
    validate_config(config);
    std::vector<ProjectReport> out;
    if (config.engine == EngineKind::analytic) {
        for (const auto& e : analytic_portfolio(portfolio, config)) {
            out.push_back({e.project_id, e.expected_revenue, e.expected_cost, e.success_prob,
                           e.conditional_revenue, e.conditional_cost});
        }
        return out;
    }
    for (const auto& cf : simulate_portfolio(portfolio, config)) {
        const auto totals = project_totals(cf);
        const auto given = conditional_success_totals(cf);
        ProjectReport r{cf.project_id(), totals.revenue, totals.cost,
                        static_cast<double>(cf.success_count()) / static_cast<double>(cf.iterations()),
                        std::nullopt, std::nullopt};
        if (given) {
            r.conditional_revenue = given->revenue;
            r.conditional_cost = given->cost;
        }
        out.push_back(std::move(r));
    }
    return out;
}

PitData analyze_pit(const ValidatedPortfolio& portfolio, const SimConfig& config,
                    const MetricDef& metric) {
    return compute_pit(evaluate_outcomes(portfolio, config), metric);
}

double portfolio_metric(const ValidatedPortfolio& portfolio, const SimConfig& config,
                        const MetricDef& metric) {
    std::vector<Totals> totals;
    for (const auto& o : evaluate_outcomes(portfolio, config)) totals.push_back(o.risk_adjusted);
    return metric.evaluate(portfolio_totals(totals));
}

WhatIfComparison analyze_whatif(const ValidatedPortfolio& portfolio, const SimConfig& config,
                                const MetricDef& metric, const WhatIf& whatif) {
    auto scenario = apply_whatif(portfolio, whatif);
    return {analyze_pit(portfolio, config, metric), analyze_pit(scenario, config, metric)};
}

} // namespace pitplot
