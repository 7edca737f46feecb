#pragma once

#include <string>

#include "pitplot/io.hpp"
#include "pitplot/model.hpp"

namespace pitplot::testing {

inline std::string fixture_path(const std::string& name) { return std::string(PITPLOT_FIXTURE_DIR) + "/" + name; }

inline ValidatedPortfolio sample() { return validate_portfolio(load_portfolio(fixture_path("sample_portfolio.json"))); }

inline ProjectSpec project(std::string id, std::vector<PhaseSpec> phases, double peak) {
    return ProjectSpec{id, id, std::move(phases), peak};
}

inline SimConfig analytic_config(double rate = 0.0, int market_years = 10) {
    SimConfig c;
    c.engine = EngineKind::analytic;
    c.discount_rate = rate;
    c.market_years = market_years;
    return c;
}

inline SimConfig mc_config(std::uint64_t iterations, double rate = 0.0, int market_years = 10) {
    SimConfig c = analytic_config(rate, market_years);
    c.engine = EngineKind::monte_carlo;
    c.iterations = iterations;
    return c;
}

} // namespace pitplot::testing
