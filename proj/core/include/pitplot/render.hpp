#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "pitplot/metrics.hpp"
#include "pitplot/tornado.hpp"

namespace pitplot {

struct ChartStyle {
    int width = 800;
    int height = 0; // 0 sizes the chart from the row count
    std::string exclusion_color = "#1f77b4";
    std::string success_color = "#2ca02c";
    std::string bar_color = "#4c72b0";
    std::string font_family = "Helvetica, Arial, sans-serif";
    int font_size = 12;
    int decimals = 3;
    bool show_values = true;
    /// Metric units from the center line to either plot edge. Unset: the
    /// largest bar magnitude padded by 10%.
    std::optional<double> value_half_range;
};

/// Throws ValidationError on invalid dimensions or decimals.
void check_style(const ChartStyle& style);

/// Paired exclusion/success bars per project around a center line at M_p.
/// Throws ValidationError when `data` has no rows.
std::string render_pit(const PitData& data, const ChartStyle& style = {});

/// One bar per variable spanning [min, max] outcome around the base line.
std::string render_tornado(std::span<const TornadoRow> rows, const ChartStyle& style = {},
                           std::string_view outcome_name = "outcome");

inline constexpr int kTextChartColumns = 60;

std::string render_text(const PitData& data, int decimals = 4);
std::string render_text(std::span<const TornadoRow> rows, std::string_view outcome_name = "outcome",
                        int decimals = 4);

} // namespace pitplot
