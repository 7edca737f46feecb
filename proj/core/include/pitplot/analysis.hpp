#pragma once

#include <vector>

#include "pitplot/metrics.hpp"
#include "pitplot/model.hpp"
#include "pitplot/report.hpp"
#include "pitplot/whatif.hpp"

namespace pitplot {

// Engine dispatch shared by the CLI and the HTTP service, so both produce the
// same numbers for the same inputs.

std::vector<ProjectOutcome> evaluate_outcomes(const ValidatedPortfolio& portfolio,
                                              const SimConfig& config);

std::vector<ProjectReport> project_reports(const ValidatedPortfolio& portfolio,
                                           const SimConfig& config);

PitData analyze_pit(const ValidatedPortfolio& portfolio, const SimConfig& config,
                    const MetricDef& metric);

/// Metric of the whole portfolio under the configured engine.
double portfolio_metric(const ValidatedPortfolio& portfolio, const SimConfig& config,
                        const MetricDef& metric);

struct WhatIfComparison {
    PitData baseline;
    PitData scenario;
};

WhatIfComparison analyze_whatif(const ValidatedPortfolio& portfolio, const SimConfig& config,
                                const MetricDef& metric, const WhatIf& whatif);

} // namespace pitplot
