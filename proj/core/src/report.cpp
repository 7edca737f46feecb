#include "pitplot/report.hpp"

#include <ostream>

#include <fmt/format.h>

namespace pitplot {

std::string format_number(double value) { return fmt::format("{}", value); }

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& value) {
    return value ? json(*value) : json(nullptr);
}

std::string csv_optional(const std::optional<double>& value) {
    return value ? format_number(*value) : std::string();
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string join_flags(const std::vector<std::string>& flags) {
    std::string out;
    for (const auto& f : flags) {
        if (!out.empty()) out += ';';
        out += f;
    }
    return out;
}

std::optional<double> read_optional(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

std::optional<double> difference(const std::optional<double>& a, const std::optional<double>& b) {
    if (!a || !b) return std::nullopt;
    return *a - *b;
}

} // namespace

json to_json(const PitData& data) {
    json rows = json::array();
    for (std::size_t k = 0; k < data.rows.size(); ++k) {
        const auto& r = data.rows[k];
        rows.push_back({{"rank", k + 1},
                        {"project_id", r.project_id},
                        {"delta_exclusion", optional_number(r.delta_exclusion)},
                        {"delta_success", optional_number(r.delta_success)},
                        {"project_metric", optional_number(r.project_metric)},
                        {"success_available", r.success_available},
                        {"flags", r.flags}});
    }
    return {{"metric", data.metric_name}, {"center_value", data.center_value}, {"rows", std::move(rows)}};
}

PitData pit_from_json(const json& doc) {
    PitData data;
    data.metric_name = doc.at("metric").get<std::string>();
    data.center_value = doc.at("center_value").get<double>();
    for (const auto& r : doc.at("rows")) {
        PitRow row;
        row.project_id = r.at("project_id").get<std::string>();
        row.delta_exclusion = read_optional(r, "delta_exclusion");
        row.delta_success = read_optional(r, "delta_success");
        row.project_metric = read_optional(r, "project_metric");
        row.success_available = r.value("success_available", true);
        row.flags = r.value("flags", std::vector<std::string>{});
        data.rows.push_back(std::move(row));
    }
    return data;
}

void write_pit_csv(std::ostream& out, const PitData& data) {
    out << "metric," << csv_field(data.metric_name) << ",center_value," << format_number(data.center_value)
        << '\n';
    out << "rank,project_id,delta_exclusion,delta_success,project_metric,flags\n";
    for (std::size_t k = 0; k < data.rows.size(); ++k) {
        const auto& r = data.rows[k];
        out << k + 1 << ',' << csv_field(r.project_id) << ',' << csv_optional(r.delta_exclusion) << ','
            << csv_optional(r.delta_success) << ',' << csv_optional(r.project_metric) << ','
            << csv_field(join_flags(r.flags)) << '\n';
    }
}

json to_json(std::span<const TornadoRow> rows) {
    json out = json::array();
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        out.push_back({{"rank", k + 1},
                       {"variable", r.variable_name},
                       {"outcome_low", r.outcome_low},
                       {"outcome_base", r.outcome_base},
                       {"outcome_high", r.outcome_high},
                       {"span", r.span}});
    }
    return out;
}

void write_tornado_csv(std::ostream& out, std::span<const TornadoRow> rows) {
    out << "rank,variable,outcome_low,outcome_base,outcome_high,span\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        out << k + 1 << ',' << csv_field(r.variable_name) << ',' << format_number(r.outcome_low) << ','
            << format_number(r.outcome_base) << ',' << format_number(r.outcome_high) << ','
            << format_number(r.span) << '\n';
    }
}

namespace {

struct ComparisonRow {
    std::string project_id;
    const PitRow* baseline;
    const PitRow* scenario; // null when the project was excluded
};

std::vector<ComparisonRow> join_rows(const PitData& baseline, const PitData& scenario) {
    std::vector<ComparisonRow> out;
    for (const auto& row : baseline.rows) out.push_back({row.project_id, &row, scenario.find(row.project_id)});
    return out;
}

} // namespace

json whatif_to_json(const PitData& baseline, const PitData& scenario) {
    json rows = json::array();
    for (const auto& c : join_rows(baseline, scenario)) {
        const std::optional<double> none;
        const auto& s_excl = c.scenario ? c.scenario->delta_exclusion : none;
        const auto& s_succ = c.scenario ? c.scenario->delta_success : none;
        rows.push_back({{"project_id", c.project_id},
                        {"excluded", c.scenario == nullptr},
                        {"baseline_delta_exclusion", optional_number(c.baseline->delta_exclusion)},
                        {"scenario_delta_exclusion", optional_number(s_excl)},
                        {"change_delta_exclusion", optional_number(difference(s_excl, c.baseline->delta_exclusion))},
                        {"baseline_delta_success", optional_number(c.baseline->delta_success)},
                        {"scenario_delta_success", optional_number(s_succ)},
                        {"change_delta_success", optional_number(difference(s_succ, c.baseline->delta_success))}});
    }
    return {{"baseline", to_json(baseline)},
            {"scenario", to_json(scenario)},
            {"comparison",
             {{"metric", baseline.metric_name},
              {"baseline_center", baseline.center_value},
              {"scenario_center", scenario.center_value},
              {"center_delta", scenario.center_value - baseline.center_value},
              {"rows", std::move(rows)}}}};
}

void write_whatif_csv(std::ostream& out, const PitData& baseline, const PitData& scenario) {
    out << "metric," << csv_field(baseline.metric_name) << ",baseline_center,"
        << format_number(baseline.center_value) << ",scenario_center," << format_number(scenario.center_value)
        << ",center_delta," << format_number(scenario.center_value - baseline.center_value) << '\n';
    out << "project_id,baseline_delta_exclusion,scenario_delta_exclusion,change_delta_exclusion,"
           "baseline_delta_success,scenario_delta_success,change_delta_success,status\n";
    for (const auto& c : join_rows(baseline, scenario)) {
        const std::optional<double> none;
        const auto& s_excl = c.scenario ? c.scenario->delta_exclusion : none;
        const auto& s_succ = c.scenario ? c.scenario->delta_success : none;
        out << csv_field(c.project_id) << ',' << csv_optional(c.baseline->delta_exclusion) << ','
            << csv_optional(s_excl) << ',' << csv_optional(difference(s_excl, c.baseline->delta_exclusion))
            << ',' << csv_optional(c.baseline->delta_success) << ',' << csv_optional(s_succ) << ','
            << csv_optional(difference(s_succ, c.baseline->delta_success)) << ','
            << (c.scenario ? "" : "excluded") << '\n';
    }
}

json to_json(std::span<const ProjectReport> reports) {
    json out = json::array();
    for (const auto& r : reports) {
        out.push_back({{"project_id", r.project_id},
                       {"revenue", r.revenue},
                       {"cost", r.cost},
                       {"success_fraction", r.success_fraction},
                       {"conditional_revenue", optional_number(r.conditional_revenue)},
                       {"conditional_cost", optional_number(r.conditional_cost)}});
    }
    return out;
}

void write_project_csv(std::ostream& out, std::span<const ProjectReport> reports) {
    out << "project_id,revenue,cost,success_fraction,conditional_revenue,conditional_cost\n";
    for (const auto& r : reports) {
        out << csv_field(r.project_id) << ',' << format_number(r.revenue) << ',' << format_number(r.cost) << ','
            << format_number(r.success_fraction) << ',' << csv_optional(r.conditional_revenue) << ','
            << csv_optional(r.conditional_cost) << '\n';
    }
}

} // namespace pitplot
