#pragma once

// Test-only reference computations. Deliberately independent of the engine:
// enumerates every gate outcome path and builds its yearly cash flows
// explicitly instead of using reach products or outcome tables.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pitplot/model.hpp"

namespace pitplot::oracle {

struct PathOutcome {
    double probability = 0.0;
    double cost = 0.0;    // discounted, summed over years
    double revenue = 0.0; // discounted, summed over years
    bool success = false;
};

inline std::vector<PathOutcome> enumerate_paths(const ProjectSpec& project, double rate, int market_years) {
    std::vector<PathOutcome> out;
    const std::size_t n = project.phases.size();
    for (std::size_t stop = 0; stop <= n; ++stop) { // stop == n: reached market
        std::map<int, std::pair<double, double>> flows; // year -> (cost, revenue)
        double prob = 1.0;
        int year = 0;
        for (std::size_t h = 0; h < n && h <= stop; ++h) {
            const auto& ph = project.phases[h];
            for (int k = 0; k < ph.duration_years; ++k) flows[year + k].first += ph.cost_total / ph.duration_years;
            year += ph.duration_years;
            if (h == stop) {
                prob *= 1.0 - ph.success_prob;
                break;
            }
            prob *= ph.success_prob;
        }
        if (stop == n) {
            for (int k = 0; k < market_years; ++k) flows[year + k].second += project.peak_sales;
        }
        PathOutcome p{prob, 0.0, 0.0, stop == n};
        for (const auto& [t, cr] : flows) {
            const double v = std::pow(1.0 + rate, -t);
            p.cost += cr.first * v;
            p.revenue += cr.second * v;
        }
        out.push_back(p);
    }
    return out;
}

struct Expectation {
    double revenue = 0.0;
    double cost = 0.0;
    double conditional_revenue = 0.0;
    double conditional_cost = 0.0;
    double success_prob = 0.0;
};

inline Expectation expectation(const ProjectSpec& project, double rate, int market_years) {
    Expectation e;
    for (const auto& p : enumerate_paths(project, rate, market_years)) {
        e.revenue += p.probability * p.revenue;
        e.cost += p.probability * p.cost;
        if (p.success) {
            e.conditional_revenue = p.revenue;
            e.conditional_cost = p.cost;
            e.success_prob = p.probability;
        }
    }
    return e;
}

// Values computed by an external path-enumeration script (flat revenue,
// 10 market years) and frozen here: id, R, C, conditional R, conditional C, P(success).
struct FrozenProject {
    const char* id;
    double revenue, cost, conditional_revenue, conditional_cost, success_prob;
};

inline constexpr FrozenProject kSampleQ0[] = {
    {"P1", 756, 305.6, 6000, 840, 0.126},          {"P2", 648, 247.2, 4000, 490, 0.162},
    {"P3", 945, 276, 7000, 590, 0.135},            {"P4", 2660, 528, 4000, 540, 0.665},
    {"P5", 194.4, 218.32, 2000, 560, 0.0972},      {"P6", 1620, 357.2, 10000, 740, 0.162},
    {"P7", 540, 196, 4000, 440, 0.135},            {"P8", 1620, 424, 3000, 440, 0.54},
    {"P9", 1474.2, 285.04, 13000, 790, 0.1134},    {"P10", 2016, 231.2, 8000, 440, 0.252},
};

inline constexpr FrozenProject kSampleQ10[] = {
    {"P1", 197.005758425, 227.315162148, 1563.53776528, 533.769346618, 0.126},
    {"P2", 247.230969351, 215.475687826, 1526.11709476, 394.09612483, 0.162},
    {"P3", 327.768330579, 233.019537572, 2427.91355985, 453.930361416, 0.135},
    {"P4", 1227.9901203, 476.959679439, 1846.60168466, 485.97545705, 0.665},
    {"P5", 61.2969345499, 173.665630327, 630.626898661, 392.517458537, 0.0972},
    {"P6", 510.807787916, 284.303516059, 3153.13449331, 530.360909407, 0.162},
    {"P7", 226.628388572, 178.703640462, 1678.72880424, 376.005737313, 0.135},
    {"P8", 747.873682287, 382.769847233, 1384.95126349, 394.790884047, 0.54},
    {"P9", 422.577351821, 216.585579909, 3726.43167391, 510.245796083, 0.1134},
    {"P10", 699.239105235, 188.227529281, 2774.75835411, 334.160692181, 0.252},
};

} // namespace pitplot::oracle
