#include "pitplot/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace pitplot {

double discount_factor(double rate, int year) { return 1.0 / std::pow(1.0 + rate, year); }

Totals project_totals(const CashFlowSet& cf) {
    double revenue = 0.0;
    double cost = 0.0;
    for (std::size_t j = 0; j < cf.iterations(); ++j) {
        revenue += cf.iteration_revenue(j);
        cost += cf.iteration_cost(j);
    }
    const auto n = static_cast<double>(cf.iterations());
    return {revenue / n, cost / n, TotalsScope::project, cf.project_id()};
}

Totals project_totals(const AnalyticExpectation& expectation) {
    return {expectation.expected_revenue, expectation.expected_cost, TotalsScope::project,
            expectation.project_id};
}

std::optional<Totals> conditional_success_totals(const CashFlowSet& cf) {
    double revenue = 0.0;
    double cost = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < cf.iterations(); ++j) {
        if (!cf.success(j)) continue;
        revenue += cf.iteration_revenue(j);
        cost += cf.iteration_cost(j);
        ++count;
    }
    if (count == 0) return std::nullopt;
    const auto n = static_cast<double>(count);
    return Totals{revenue / n, cost / n, TotalsScope::project, cf.project_id()};
}

Totals portfolio_totals(std::span<const Totals> projects) {
    Totals out{0.0, 0.0, TotalsScope::portfolio, {}};
    for (const auto& t : projects) {
        out.revenue += t.revenue;
        out.cost += t.cost;
    }
    return out;
}

Totals exclusion_totals(std::span<const Totals> projects, std::size_t index) {
    if (projects.size() < 2) {
        throw DomainError("exclusion undefined: portfolio has a single project");
    }
    Totals out{0.0, 0.0, TotalsScope::portfolio_excluding, projects[index].subject};
    for (std::size_t k = 0; k < projects.size(); ++k) {
        if (k == index) continue;
        out.revenue += projects[k].revenue;
        out.cost += projects[k].cost;
    }
    return out;
}

namespace {

// Summed in project order with project `index` replaced, so a project whose
// conditional totals equal its risk-adjusted ones reproduces the portfolio
// totals bit for bit.
Totals substituted_totals(std::span<const Totals> projects, std::size_t index, const Totals& given) {
    Totals out{0.0, 0.0, TotalsScope::portfolio_given_success, projects[index].subject};
    for (std::size_t k = 0; k < projects.size(); ++k) {
        const auto& t = k == index ? given : projects[k];
        out.revenue += t.revenue;
        out.cost += t.cost;
    }
    return out;
}

std::string not_estimable(std::string_view id) {
    return fmt::format("success bar not estimable for project {}", id);
}

} // namespace

Totals success_conditional_totals(std::span<const Totals> projects, std::size_t index,
                                  const CashFlowSet& cf) {
    auto given = conditional_success_totals(cf);
    if (!given) throw DomainError(not_estimable(cf.project_id()));
    return substituted_totals(projects, index, *given);
}

Totals success_conditional_totals(std::span<const Totals> projects, std::size_t index,
                                  const AnalyticExpectation& expectation) {
    if (!(expectation.success_prob > 0.0)) throw DomainError(not_estimable(expectation.project_id));
    return substituted_totals(projects, index,
                              Totals{expectation.conditional_revenue, expectation.conditional_cost,
                                     TotalsScope::project, expectation.project_id});
}

double productivity_index(const Totals& totals) {
    if (!(totals.cost > 0.0)) throw DomainError("PI undefined for zero cost");
    return (totals.revenue - totals.cost) / totals.cost;
}

double enpv(const Totals& totals) { return totals.revenue - totals.cost; }

MetricDef pi_metric() { return {"PI", productivity_index, false}; }
MetricDef enpv_metric() { return {"eNPV", enpv, true}; }

MetricDef metric_by_name(std::string_view name) {
    if (name == "pi" || name == "PI") return pi_metric();
    if (name == "enpv" || name == "eNPV") return enpv_metric();
    throw ValidationError("", "metric", fmt::format("unknown metric '{}' (expected pi or enpv)", name));
}

ProjectOutcome summarize(const CashFlowSet& cf) {
    return {cf.project_id(), project_totals(cf), conditional_success_totals(cf)};
}

ProjectOutcome summarize(const AnalyticExpectation& expectation) {
    ProjectOutcome out{expectation.project_id, project_totals(expectation), std::nullopt};
    if (expectation.success_prob > 0.0) {
        out.given_success = Totals{expectation.conditional_revenue, expectation.conditional_cost,
                                   TotalsScope::project, expectation.project_id};
    }
    return out;
}

const PitRow* PitData::find(std::string_view project_id) const {
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const PitRow& r) { return r.project_id == project_id; });
    return it == rows.end() ? nullptr : &*it;
}

PitData compute_pit(std::span<const ProjectOutcome> outcomes, const MetricDef& metric) {
    if (outcomes.size() < 2) {
        throw DomainError("exclusion undefined: a PIT-plot needs at least two projects");
    }
    std::vector<Totals> totals;
    totals.reserve(outcomes.size());
    for (const auto& o : outcomes) totals.push_back(o.risk_adjusted);

    PitData data;
    data.metric_name = metric.name;
    data.center_value = metric.evaluate(portfolio_totals(totals));

    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        PitRow row;
        row.project_id = outcomes[i].project_id;
        try {
            row.delta_exclusion = metric.evaluate(exclusion_totals(totals, i)) - data.center_value;
        } catch (const DomainError& e) {
            row.flags.push_back(fmt::format("exclusion_undefined: {}", e.what()));
        }
        if (outcomes[i].given_success) {
            try {
                row.delta_success =
                    metric.evaluate(substituted_totals(totals, i, *outcomes[i].given_success)) -
                    data.center_value;
            } catch (const DomainError& e) {
                row.flags.push_back(fmt::format("success_undefined: {}", e.what()));
            }
        } else {
            row.success_available = false;
            row.flags.push_back("success_unavailable: " + not_estimable(row.project_id));
        }
        try {
            row.project_metric = metric.evaluate(totals[i]);
        } catch (const DomainError&) {
            row.flags.push_back("project_metric_undefined");
        }
        data.rows.push_back(std::move(row));
    }

    std::sort(data.rows.begin(), data.rows.end(), [](const PitRow& a, const PitRow& b) {
        if (a.delta_exclusion.has_value() != b.delta_exclusion.has_value()) {
            return a.delta_exclusion.has_value();
        }
        if (a.delta_exclusion && *a.delta_exclusion != *b.delta_exclusion) {
            return *a.delta_exclusion < *b.delta_exclusion;
        }
        return a.project_id < b.project_id;
    });
    return data;
}

} // namespace pitplot
