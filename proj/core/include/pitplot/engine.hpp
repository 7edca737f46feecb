#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pitplot/model.hpp"
#include "pitplot/rng.hpp"

namespace pitplot {

/// Nominal revenue per market year (index 0 = first year after Reg ends).
std::vector<double> revenue_curve(double peak_sales, const SimConfig& config);

/// Simulated per-iteration, per-year cash flows of one project.
///
/// Phase timing is deterministic, so an iteration is fully described by how
/// many gates it passed. The set stores that count per iteration plus one
/// nominal and one discounted year row per possible outcome; cell accessors
/// return c_ijt / r_ijt without materialising J x T matrices.
class CashFlowSet {
public:
    CashFlowSet(std::string project_id, int horizon_years, std::size_t phase_count,
                std::vector<std::vector<double>> nominal_cost_rows,
                std::vector<std::vector<double>> nominal_revenue_rows,
                std::vector<double> discount, std::vector<std::uint8_t> gates_passed);

    const std::string& project_id() const noexcept { return project_id_; }
    int horizon_years() const noexcept { return horizon_; }
    std::size_t iterations() const noexcept { return gates_passed_.size(); }
    std::size_t phase_count() const noexcept { return phase_count_; }

    double cost(std::size_t j, int t) const { return cost_rows_[outcome(j)][cell(t)]; }
    double revenue(std::size_t j, int t) const { return revenue_rows_[outcome(j)][cell(t)]; }
    double nominal_cost(std::size_t j, int t) const { return nominal_cost_rows_[outcome(j)][cell(t)]; }
    double nominal_revenue(std::size_t j, int t) const {
        return nominal_revenue_rows_[outcome(j)][cell(t)];
    }
    bool success(std::size_t j) const { return outcome(j) == phase_count_; }
    /// Gates passed in iteration j (phase_count() means reached market).
    std::size_t gates_passed(std::size_t j) const { return outcome(j); }

    /// Discounted totals summed over years for iteration j.
    double iteration_cost(std::size_t j) const { return cost_totals_[outcome(j)]; }
    double iteration_revenue(std::size_t j) const { return revenue_totals_[outcome(j)]; }

    std::size_t success_count() const noexcept;
    const std::vector<std::uint8_t>& outcomes() const noexcept { return gates_passed_; }
    const std::vector<double>& discount_factors() const noexcept { return discount_; }

    bool operator==(const CashFlowSet&) const = default;

private:
    std::size_t outcome(std::size_t j) const { return gates_passed_.at(j); }
    std::size_t cell(int t) const { return static_cast<std::size_t>(t); }

    std::string project_id_;
    int horizon_;
    std::size_t phase_count_;
    std::vector<std::vector<double>> nominal_cost_rows_;
    std::vector<std::vector<double>> nominal_revenue_rows_;
    std::vector<std::vector<double>> cost_rows_;
    std::vector<std::vector<double>> revenue_rows_;
    std::vector<double> cost_totals_;
    std::vector<double> revenue_totals_;
    std::vector<double> discount_;
    std::vector<std::uint8_t> gates_passed_;
};

/// Exact expectation of the phase-gate model.
struct AnalyticExpectation {
    std::string project_id;
    double expected_revenue = 0.0;
    double expected_cost = 0.0;
    double success_prob = 0.0;
    double conditional_revenue = 0.0;
    double conditional_cost = 0.0;
};

/// Years needed to hold every flow of `project` under `config`.
int project_horizon(const ProjectSpec& project, const SimConfig& config);

/// Monte Carlo ledger for one project. `horizon_years` pads the year axis;
/// 0 uses the project's own horizon.
CashFlowSet simulate_project(const ProjectSpec& project, const SimConfig& config,
                             const RandomSubstream& substream, int horizon_years = 0);

AnalyticExpectation analytic_expectation(const ProjectSpec& project, const SimConfig& config);

/// One CashFlowSet per project on a common horizon. Each project draws from
/// RandomSubstream::derive(config.seed, project.id). `threads` = 0 picks the
/// hardware concurrency; results do not depend on it.
std::vector<CashFlowSet> simulate_portfolio(const ValidatedPortfolio& portfolio,
                                            const SimConfig& config, unsigned threads = 0);

std::vector<AnalyticExpectation> analytic_portfolio(const ValidatedPortfolio& portfolio,
                                                    const SimConfig& config);

/// Raw ledger as CSV: project_id,iteration,year,nominal_cost,cost,nominal_revenue,revenue.
void write_ledger_csv(std::ostream& out, std::span<const CashFlowSet> sets);

} // namespace pitplot
