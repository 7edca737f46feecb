#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pitplot/engine.hpp"

namespace pitplot {

/// Present-value factor 1/(1+rate)^year.
double discount_factor(double rate, int year);

enum class TotalsScope { project, portfolio, portfolio_excluding, portfolio_given_success };

/// Risk-adjusted revenue/cost pair (already discounted).
struct Totals {
    double revenue = 0.0;
    double cost = 0.0;
    TotalsScope scope = TotalsScope::project;
    std::string subject; // project id for project/excluding/given_success scopes

    bool operator==(const Totals&) const = default;
};

/// Grand means over iterations of year-summed discounted flows.
Totals project_totals(const CashFlowSet& cf);
Totals project_totals(const AnalyticExpectation& expectation);

/// Mean over success iterations only; nullopt when no iteration succeeded.
std::optional<Totals> conditional_success_totals(const CashFlowSet& cf);

Totals portfolio_totals(std::span<const Totals> projects);

/// Sums over every project except `index`. Throws DomainError for a
/// single-project portfolio.
Totals exclusion_totals(std::span<const Totals> projects, std::size_t index);

/// Other projects' risk-adjusted totals plus project `index`'s mean over
/// its success iterations. Throws DomainError when none succeeded.
Totals success_conditional_totals(std::span<const Totals> projects, std::size_t index,
                                  const CashFlowSet& cf);
/// Analytic variant; throws DomainError when the success probability is 0.
Totals success_conditional_totals(std::span<const Totals> projects, std::size_t index,
                                  const AnalyticExpectation& expectation);

/// (R - C) / C. Throws DomainError when C <= 0.
double productivity_index(const Totals& totals);
/// R - C.
double enpv(const Totals& totals);

/// A portfolio metric evaluated on aggregated totals.
struct MetricDef {
    std::string name;
    std::function<double(const Totals&)> evaluate;
    bool additive = false;
};

MetricDef pi_metric();
MetricDef enpv_metric();
/// "pi" or "enpv"; throws ValidationError otherwise.
MetricDef metric_by_name(std::string_view name);

/// Per-project input to compute_pit, from either engine.
struct ProjectOutcome {
    std::string project_id;
    Totals risk_adjusted;
    std::optional<Totals> given_success;
};

ProjectOutcome summarize(const CashFlowSet& cf);
ProjectOutcome summarize(const AnalyticExpectation& expectation);

struct PitRow {
    std::string project_id;
    std::optional<double> delta_exclusion;
    std::optional<double> delta_success;
    std::optional<double> project_metric;
    bool success_available = true;
    std::vector<std::string> flags;

    bool operator==(const PitRow&) const = default;
};

struct PitData {
    std::string metric_name;
    double center_value = 0.0;
    std::vector<PitRow> rows; // ascending delta_exclusion, ties by id

    const PitRow* find(std::string_view project_id) const;
    bool operator==(const PitData&) const = default;
};

/// Exclusion and success bars for every project. The center metric must be
/// defined (DomainError otherwise) and the portfolio needs at least two
/// projects. Per-row metric failures become flags on that row.
PitData compute_pit(std::span<const ProjectOutcome> outcomes, const MetricDef& metric);

} // namespace pitplot
