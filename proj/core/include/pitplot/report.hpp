#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "pitplot/engine.hpp"
#include "pitplot/metrics.hpp"
#include "pitplot/tornado.hpp"

namespace pitplot {

// Tabular exports. Numbers use the shortest round-trip decimal form so CSV
// and JSON carry identical values.

std::string format_number(double value);

nlohmann::json to_json(const PitData& data);
PitData pit_from_json(const nlohmann::json& doc);
void write_pit_csv(std::ostream& out, const PitData& data);

nlohmann::json to_json(std::span<const TornadoRow> rows);
void write_tornado_csv(std::ostream& out, std::span<const TornadoRow> rows);

/// Baseline and scenario rows joined by project id with scenario - baseline deltas.
nlohmann::json whatif_to_json(const PitData& baseline, const PitData& scenario);
void write_whatif_csv(std::ostream& out, const PitData& baseline, const PitData& scenario);

/// Per-project summary produced by `simulate`.
struct ProjectReport {
    std::string project_id;
    double revenue = 0.0;
    double cost = 0.0;
    double success_fraction = 0.0;
    std::optional<double> conditional_revenue;
    std::optional<double> conditional_cost;
};

nlohmann::json to_json(std::span<const ProjectReport> reports);
void write_project_csv(std::ostream& out, std::span<const ProjectReport> reports);

} // namespace pitplot
