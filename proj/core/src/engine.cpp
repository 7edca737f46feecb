#include "pitplot/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "pitplot/metrics.hpp"
#include "pitplot/report.hpp"

namespace pitplot {

std::vector<double> revenue_curve(double peak_sales, const SimConfig& config) {
    std::vector<double> curve(static_cast<std::size_t>(config.market_years), peak_sales);
    for (int k = 0; k < config.ramp_years && k < config.market_years; ++k) {
        curve[static_cast<std::size_t>(k)] =
            peak_sales * static_cast<double>(k + 1) / static_cast<double>(config.ramp_years + 1);
    }
    return curve;
}

CashFlowSet::CashFlowSet(std::string project_id, int horizon_years, std::size_t phase_count,
                         std::vector<std::vector<double>> nominal_cost_rows,
                         std::vector<std::vector<double>> nominal_revenue_rows,
                         std::vector<double> discount, std::vector<std::uint8_t> gates_passed)
    : project_id_(std::move(project_id)),
      horizon_(horizon_years),
      phase_count_(phase_count),
      nominal_cost_rows_(std::move(nominal_cost_rows)),
      nominal_revenue_rows_(std::move(nominal_revenue_rows)),
      discount_(std::move(discount)),
      gates_passed_(std::move(gates_passed)) {
    const auto outcomes = phase_count_ + 1;
    const auto width = static_cast<std::size_t>(horizon_);
    if (nominal_cost_rows_.size() != outcomes || nominal_revenue_rows_.size() != outcomes ||
        discount_.size() != width) {
        throw std::invalid_argument("CashFlowSet: inconsistent outcome table shape");
    }
    cost_rows_.resize(outcomes);
    revenue_rows_.resize(outcomes);
    cost_totals_.resize(outcomes);
    revenue_totals_.resize(outcomes);
    for (std::size_t k = 0; k < outcomes; ++k) {
        if (nominal_cost_rows_[k].size() != width || nominal_revenue_rows_[k].size() != width) {
            throw std::invalid_argument("CashFlowSet: row width differs from horizon");
        }
        cost_rows_[k].resize(width);
        revenue_rows_[k].resize(width);
        for (std::size_t t = 0; t < width; ++t) {
            cost_rows_[k][t] = nominal_cost_rows_[k][t] * discount_[t];
            revenue_rows_[k][t] = nominal_revenue_rows_[k][t] * discount_[t];
        }
        cost_totals_[k] = std::accumulate(cost_rows_[k].begin(), cost_rows_[k].end(), 0.0);
        revenue_totals_[k] = std::accumulate(revenue_rows_[k].begin(), revenue_rows_[k].end(), 0.0);
    }
    for (auto g : gates_passed_) {
        if (g > phase_count_) throw std::invalid_argument("CashFlowSet: outcome out of range");
    }
}

std::size_t CashFlowSet::success_count() const noexcept {
    return static_cast<std::size_t>(std::count(gates_passed_.begin(), gates_passed_.end(),
                                               static_cast<std::uint8_t>(phase_count_)));
}

int project_horizon(const ProjectSpec& project, const SimConfig& config) {
    return project.development_years() + config.market_years;
}

namespace {

struct OutcomeTable {
    std::vector<std::vector<double>> cost;
    std::vector<std::vector<double>> revenue;
    std::vector<double> discount;
};

// Nominal year rows for every outcome k: k < n failed at phase k (its cost
// fully incurred), k == n reached market.
OutcomeTable build_outcome_table(const ProjectSpec& project, const SimConfig& config, int horizon) {
    const auto n = project.phases.size();
    const auto width = static_cast<std::size_t>(horizon);
    OutcomeTable table;
    table.cost.assign(n + 1, std::vector<double>(width, 0.0));
    table.revenue.assign(n + 1, std::vector<double>(width, 0.0));
    table.discount.resize(width);
    for (std::size_t t = 0; t < width; ++t) {
        table.discount[t] = discount_factor(config.discount_rate, static_cast<int>(t));
    }

    int start = 0;
    for (std::size_t h = 0; h < n; ++h) {
        const auto& phase = project.phases[h];
        const double per_year = phase.cost_total / phase.duration_years;
        for (int y = start; y < start + phase.duration_years; ++y) {
            for (std::size_t k = h; k <= n; ++k) table.cost[k][static_cast<std::size_t>(y)] = per_year;
        }
        start += phase.duration_years;
    }
    const auto curve = revenue_curve(project.peak_sales, config);
    for (std::size_t m = 0; m < curve.size(); ++m) {
        table.revenue[n][static_cast<std::size_t>(start) + m] = curve[m];
    }
    return table;
}

} // namespace

CashFlowSet simulate_project(const ProjectSpec& project, const SimConfig& config,
                             const RandomSubstream& substream, int horizon_years) {
    const int horizon = std::max(horizon_years, project_horizon(project, config));
    auto table = build_outcome_table(project, config, horizon);

    std::vector<std::uint8_t> gates(config.iterations, 0);
    for (std::uint64_t j = 0; j < config.iterations; ++j) {
        std::uint8_t passed = 0;
        for (std::size_t h = 0; h < project.phases.size(); ++h) {
            if (substream.uniform(j, static_cast<std::uint32_t>(h)) >= project.phases[h].success_prob) break;
            ++passed;
        }
        gates[j] = passed;
    }
    return CashFlowSet(project.id, horizon, project.phases.size(), std::move(table.cost),
                       std::move(table.revenue), std::move(table.discount), std::move(gates));
}

AnalyticExpectation analytic_expectation(const ProjectSpec& project, const SimConfig& config) {
    AnalyticExpectation out;
    out.project_id = project.id;

    double reach = 1.0;
    int start = 0;
    for (const auto& phase : project.phases) {
        const double per_year = phase.cost_total / phase.duration_years;
        double phase_cost = 0.0;
        for (int y = start; y < start + phase.duration_years; ++y) {
            phase_cost += per_year * discount_factor(config.discount_rate, y);
        }
        out.expected_cost += reach * phase_cost;
        out.conditional_cost += phase_cost;
        reach *= phase.success_prob;
        start += phase.duration_years;
    }
    out.success_prob = reach;

    const auto curve = revenue_curve(project.peak_sales, config);
    for (std::size_t m = 0; m < curve.size(); ++m) {
        out.conditional_revenue += curve[m] * discount_factor(config.discount_rate, start + static_cast<int>(m));
    }
    out.expected_revenue = out.success_prob * out.conditional_revenue;
    return out;
}

std::vector<CashFlowSet> simulate_portfolio(const ValidatedPortfolio& portfolio,
                                            const SimConfig& config, unsigned threads) {
    const auto& projects = portfolio.projects();
    int horizon = 0;
    for (const auto& p : projects) horizon = std::max(horizon, project_horizon(p, config));

    std::vector<std::optional<CashFlowSet>> slots(projects.size());
    auto run_one = [&](std::size_t i) {
        slots[i].emplace(simulate_project(projects[i], config,
                                          RandomSubstream::derive(config.seed, projects[i].id), horizon));
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, projects.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < projects.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < projects.size(); i = next++) {
                    try {
                        run_one(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        workers.clear();
        if (failure) std::rethrow_exception(failure);
    }

    std::vector<CashFlowSet> out;
    out.reserve(slots.size());
    for (auto& slot : slots) out.push_back(std::move(*slot));
    return out;
}

std::vector<AnalyticExpectation> analytic_portfolio(const ValidatedPortfolio& portfolio,
                                                    const SimConfig& config) {
    std::vector<AnalyticExpectation> out;
    out.reserve(portfolio.size());
    for (const auto& p : portfolio.projects()) out.push_back(analytic_expectation(p, config));
    return out;
}

void write_ledger_csv(std::ostream& out, std::span<const CashFlowSet> sets) {
    out << "project_id,iteration,year,nominal_cost,cost,nominal_revenue,revenue\n";
    for (const auto& cf : sets) {
        for (std::size_t j = 0; j < cf.iterations(); ++j) {
            for (int t = 0; t < cf.horizon_years(); ++t) {
                out << cf.project_id() << ',' << j << ',' << t << ',' << format_number(cf.nominal_cost(j, t))
                    << ',' << format_number(cf.cost(j, t)) << ',' << format_number(cf.nominal_revenue(j, t))
                    << ',' << format_number(cf.revenue(j, t)) << '\n';
            }
        }
    }
}

} // namespace pitplot
