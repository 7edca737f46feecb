#include "pitplot/render.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace pitplot {

namespace {

constexpr double kLeftMargin = 140.0;
constexpr double kRightMargin = 40.0;
constexpr double kTopMargin = 56.0;
constexpr double kBottomMargin = 56.0;
constexpr double kPitRowHeight = 36.0;
constexpr double kTornadoRowHeight = 28.0;
constexpr double kPadding = 1.10;

std::string xml_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string px(double v) { return fmt::format("{:.2f}", v); }

std::string value_text(double v, int decimals) { return fmt::format("{:+.{}f}", v, decimals); }

// Horizontal placement shared by both charts: the center line sits in the
// middle of the plot area and maps value 0 (relative to the center).
struct Frame {
    double width;
    double height;
    double plot_top;
    double plot_bottom;
    double center_x;
    double half_px;
    double half_range;
    double row_height;

    double offset(double value) const { return value / half_range * half_px; }
};

Frame make_frame(const ChartStyle& style, std::size_t rows, double natural_row_height, double max_abs) {
    Frame f{};
    f.width = style.width;
    f.height = style.height > 0 ? style.height
                                : kTopMargin + natural_row_height * static_cast<double>(rows) + kBottomMargin;
    f.plot_top = kTopMargin;
    f.plot_bottom = f.height - kBottomMargin;
    f.row_height = std::max(1.0, (f.plot_bottom - f.plot_top) / static_cast<double>(rows));
    f.center_x = (kLeftMargin + (f.width - kRightMargin)) / 2.0;
    f.half_px = (f.width - kRightMargin - kLeftMargin) / 2.0;
    if (style.value_half_range) {
        f.half_range = *style.value_half_range;
    } else {
        f.half_range = max_abs > 0.0 ? max_abs * kPadding : 1.0;
    }
    return f;
}

void open_svg(std::string& out, const Frame& f, const ChartStyle& style) {
    out += fmt::format("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                       "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" "
                       "viewBox=\"0 0 {} {}\" font-family=\"{}\" font-size=\"{}\">\n",
                       px(f.width), px(f.height), px(f.width), px(f.height), xml_escape(style.font_family),
                       style.font_size);
    out += fmt::format("<rect class=\"background\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
                       px(f.width), px(f.height));
}

// Ticks at -1, -1/2, 0, +1/2, +1 of the half range, labelled in absolute units.
void draw_axis(std::string& out, const Frame& f, double center_value, std::string_view label,
               const ChartStyle& style) {
    const double y = f.plot_bottom;
    out += fmt::format("<g class=\"axis\">\n<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333333\"/>\n",
                       px(f.center_x - f.half_px), px(y), px(f.center_x + f.half_px), px(y));
    for (int k = -2; k <= 2; ++k) {
        const double rel = f.half_range * k / 2.0;
        const double x = f.center_x + f.offset(rel);
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333333\"/>\n", px(x), px(y),
                           px(x), px(y + 5));
        out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", px(x),
                           px(y + 5 + style.font_size), fmt::format("{:.{}f}", center_value + rel, style.decimals));
    }
    out += fmt::format("<text class=\"axis-label\" x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n</g>\n",
                       px(f.center_x), px(f.height - 12), xml_escape(label));
}

void draw_center_line(std::string& out, const Frame& f) {
    out += fmt::format("<line class=\"center-line\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\" "
                       "stroke-width=\"1.5\"/>\n",
                       px(f.center_x), px(f.plot_top - 6), px(f.center_x), px(f.plot_bottom));
}

void draw_bar(std::string& out, const Frame& f, std::string_view cls, double from, double to, double y,
              double h, std::string_view color) {
    const double x0 = f.center_x + f.offset(from);
    const double x1 = f.center_x + f.offset(to);
    out += fmt::format("<rect class=\"bar {}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", cls,
                       px(std::min(x0, x1)), px(y), px(std::abs(x1 - x0)), px(h), color);
}

void draw_value(std::string& out, const Frame& f, double at, double y, double h, const std::string& text,
                const ChartStyle& style) {
    const double x = f.center_x + f.offset(at);
    const bool right = at >= 0.0;
    out += fmt::format("<text class=\"value\" x=\"{}\" y=\"{}\" text-anchor=\"{}\" font-size=\"{}\">{}</text>\n",
                       px(x + (right ? 4.0 : -4.0)), px(y + h / 2.0 + style.font_size * 0.35),
                       right ? "start" : "end", std::max(1, style.font_size - 2), text);
}

} // namespace

void check_style(const ChartStyle& style) {
    std::vector<Diagnostic> problems;
    if (style.width <= static_cast<int>(kLeftMargin + kRightMargin)) {
        problems.push_back({"", "width", fmt::format("must exceed {} px", kLeftMargin + kRightMargin)});
    }
    if (style.height < 0 || (style.height > 0 && style.height <= static_cast<int>(kTopMargin + kBottomMargin))) {
        problems.push_back({"", "height", fmt::format("must be 0 (auto) or exceed {} px", kTopMargin + kBottomMargin)});
    }
    if (style.font_size <= 0) problems.push_back({"", "font_size", "must be positive"});
    if (style.decimals < 0 || style.decimals > 6) problems.push_back({"", "decimals", "must be in 0..6"});
    if (style.value_half_range && !(*style.value_half_range > 0.0 && std::isfinite(*style.value_half_range))) {
        problems.push_back({"", "value_half_range", "must be positive"});
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

std::string render_pit(const PitData& data, const ChartStyle& style) {
    check_style(style);
    if (data.rows.empty()) throw ValidationError("", "rows", "PIT data has no rows to render");

    double max_abs = 0.0;
    for (const auto& r : data.rows) {
        if (r.delta_exclusion) max_abs = std::max(max_abs, std::abs(*r.delta_exclusion));
        if (r.delta_success) max_abs = std::max(max_abs, std::abs(*r.delta_success));
    }
    const Frame f = make_frame(style, data.rows.size(), kPitRowHeight, max_abs);

    std::string out;
    open_svg(out, f, style);
    out += fmt::format("<text class=\"title\" x=\"{}\" y=\"20\" text-anchor=\"middle\" font-weight=\"bold\">"
                       "PIT-plot: {} (portfolio = {})</text>\n",
                       px(f.width / 2.0), xml_escape(data.metric_name),
                       fmt::format("{:.{}f}", data.center_value, style.decimals));
    out += fmt::format("<g class=\"legend\">\n"
                       "<rect x=\"{}\" y=\"30\" width=\"12\" height=\"12\" fill=\"{}\"/>\n"
                       "<text x=\"{}\" y=\"40\">Exclusion</text>\n"
                       "<rect x=\"{}\" y=\"30\" width=\"12\" height=\"12\" fill=\"{}\"/>\n"
                       "<text x=\"{}\" y=\"40\">Success</text>\n</g>\n",
                       px(kLeftMargin), style.exclusion_color, px(kLeftMargin + 16), px(kLeftMargin + 100),
                       style.success_color, px(kLeftMargin + 116));

    const double gap = std::min(4.0, f.row_height / 9.0);
    const double bar_h = (f.row_height - 3.0 * gap) / 2.0;
    for (std::size_t k = 0; k < data.rows.size(); ++k) {
        const auto& r = data.rows[k];
        const double y = f.plot_top + f.row_height * static_cast<double>(k);
        const double y_excl = y + gap;
        const double y_succ = y_excl + bar_h + gap;
        out += fmt::format("<g class=\"pit-row\" data-project=\"{}\">\n", xml_escape(r.project_id));
        out += fmt::format("<text class=\"label\" x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
                           px(kLeftMargin - 8), px(y + f.row_height / 2.0 + style.font_size * 0.35),
                           xml_escape(r.project_id));
        if (r.delta_exclusion) {
            draw_bar(out, f, "exclusion", 0.0, *r.delta_exclusion, y_excl, bar_h, style.exclusion_color);
            if (style.show_values) {
                draw_value(out, f, *r.delta_exclusion, y_excl, bar_h,
                           value_text(*r.delta_exclusion, style.decimals), style);
            }
        } else {
            out += fmt::format("<rect class=\"bar exclusion placeholder\" x=\"{}\" y=\"{}\" width=\"0.00\" "
                               "height=\"{}\" fill=\"none\" stroke=\"{}\" stroke-dasharray=\"3,2\"/>\n",
                               px(f.center_x), px(y_excl), px(bar_h), style.exclusion_color);
            draw_value(out, f, 0.0, y_excl, bar_h, "undefined", style);
        }
        if (r.delta_success) {
            draw_bar(out, f, "success", 0.0, *r.delta_success, y_succ, bar_h, style.success_color);
            if (style.show_values) {
                draw_value(out, f, *r.delta_success, y_succ, bar_h, value_text(*r.delta_success, style.decimals),
                           style);
            }
        } else {
            const double w = std::min(40.0, f.half_px);
            out += fmt::format("<rect class=\"bar success placeholder\" x=\"{}\" y=\"{}\" width=\"{}\" "
                               "height=\"{}\" fill=\"none\" stroke=\"{}\" stroke-dasharray=\"3,2\"/>\n",
                               px(f.center_x), px(y_succ), px(w), px(bar_h), style.success_color);
            draw_value(out, f, f.half_range * w / f.half_px, y_succ, bar_h, "n/a", style);
        }
        out += "</g>\n";
    }
    draw_center_line(out, f);
    draw_axis(out, f, data.center_value, data.metric_name, style);
    out += "</svg>\n";
    return out;
}

std::string render_tornado(std::span<const TornadoRow> rows, const ChartStyle& style,
                           std::string_view outcome_name) {
    check_style(style);
    if (rows.empty()) throw ValidationError("", "rows", "tornado data has no rows to render");

    const double base = rows.front().outcome_base;
    double max_abs = 0.0;
    for (const auto& r : rows) {
        for (double v : {r.outcome_low, r.outcome_high}) max_abs = std::max(max_abs, std::abs(v - base));
    }
    const Frame f = make_frame(style, rows.size(), kTornadoRowHeight, max_abs);

    std::string out;
    open_svg(out, f, style);
    out += fmt::format("<text class=\"title\" x=\"{}\" y=\"20\" text-anchor=\"middle\" font-weight=\"bold\">"
                       "Tornado: {} (base = {})</text>\n",
                       px(f.width / 2.0), xml_escape(outcome_name), fmt::format("{:.{}f}", base, style.decimals));

    const double gap = std::min(5.0, f.row_height / 6.0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        const double y = f.plot_top + f.row_height * static_cast<double>(k) + gap;
        const double h = f.row_height - 2.0 * gap;
        const double lo = std::min({r.outcome_low, r.outcome_base, r.outcome_high}) - base;
        const double hi = std::max({r.outcome_low, r.outcome_base, r.outcome_high}) - base;
        out += fmt::format("<g class=\"tornado-row\" data-variable=\"{}\">\n", xml_escape(r.variable_name));
        out += fmt::format("<text class=\"label\" x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
                           px(kLeftMargin - 8), px(y + h / 2.0 + style.font_size * 0.35), xml_escape(r.variable_name));
        draw_bar(out, f, "span", lo, hi, y, h, style.bar_color);
        if (style.show_values) {
            draw_value(out, f, lo, y, h, fmt::format("{:.{}f}", lo + base, style.decimals), style);
            draw_value(out, f, hi > 0.0 ? hi : 0.0, y, h, fmt::format("{:.{}f}", hi + base, style.decimals), style);
        }
        out += "</g>\n";
    }
    draw_center_line(out, f);
    draw_axis(out, f, base, outcome_name, style);
    out += "</svg>\n";
    return out;
}

namespace {

constexpr int kHalfColumns = kTextChartColumns / 2;

std::string centered_bar(double value, double scale, char fill) {
    std::string bar(kTextChartColumns, ' ');
    if (scale <= 0.0) return bar;
    const int n = std::min(kHalfColumns, static_cast<int>(std::lround(std::abs(value) / scale * kHalfColumns)));
    const int begin = value < 0.0 ? kHalfColumns - n : kHalfColumns;
    std::fill_n(bar.begin() + begin, n, fill);
    return bar;
}

std::string text_value(const std::optional<double>& v, int decimals) {
    return v ? fmt::format("{:+.{}f}", *v, decimals) : std::string("n/a");
}

} // namespace

std::string render_text(const PitData& data, int decimals) {
    double scale = 0.0;
    std::size_t id_width = 7;
    for (const auto& r : data.rows) {
        if (r.delta_exclusion) scale = std::max(scale, std::abs(*r.delta_exclusion));
        if (r.delta_success) scale = std::max(scale, std::abs(*r.delta_success));
        id_width = std::max(id_width, r.project_id.size());
    }
    std::string out = fmt::format("PIT-plot  metric: {}  center: {:.{}f}\n", data.metric_name, data.center_value,
                                  decimals);
    out += fmt::format("{:>4}  {:<{}}   {:>12} |{:^{}}|\n", "rank", "project", id_width, "delta", "E=exclusion #  S=success =",
                       kTextChartColumns);
    for (std::size_t k = 0; k < data.rows.size(); ++k) {
        const auto& r = data.rows[k];
        out += fmt::format("{:>4}  {:<{}} E {:>12} |{}|\n", k + 1, r.project_id, id_width,
                           text_value(r.delta_exclusion, decimals),
                           r.delta_exclusion ? centered_bar(*r.delta_exclusion, scale, '#')
                                             : std::string(kTextChartColumns, ' '));
        out += fmt::format("{:>4}  {:<{}} S {:>12} |{}|\n", "", "", id_width, text_value(r.delta_success, decimals),
                           r.delta_success ? centered_bar(*r.delta_success, scale, '=')
                                           : std::string(kTextChartColumns, ' '));
    }
    return out;
}

std::string render_text(std::span<const TornadoRow> rows, std::string_view outcome_name, int decimals) {
    const double base = rows.empty() ? 0.0 : rows.front().outcome_base;
    double lo = base;
    double hi = base;
    std::size_t name_width = 8;
    for (const auto& r : rows) {
        lo = std::min({lo, r.outcome_low, r.outcome_high});
        hi = std::max({hi, r.outcome_low, r.outcome_high});
        name_width = std::max(name_width, r.variable_name.size());
    }
    const double range = hi - lo;
    auto column = [&](double v) {
        return range > 0.0 ? static_cast<int>(std::lround((v - lo) / range * kTextChartColumns)) : 0;
    };

    std::string out = fmt::format("Tornado  outcome: {}  base: {:.{}f}\n", outcome_name, base, decimals);
    out += fmt::format("{:>4}  {:<{}} {:>12} {:>12} {:>12} |{:^{}}|\n", "rank", "variable", name_width, "low", "high",
                       "span", "", kTextChartColumns);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        std::string bar(kTextChartColumns, ' ');
        const int a = column(std::min({r.outcome_low, r.outcome_base, r.outcome_high}));
        const int b = column(std::max({r.outcome_low, r.outcome_base, r.outcome_high}));
        std::fill(bar.begin() + a, bar.begin() + b, '#');
        out += fmt::format("{:>4}  {:<{}} {:>12.{}f} {:>12.{}f} {:>12.{}f} |{}|\n", k + 1, r.variable_name, name_width,
                           r.outcome_low, decimals, r.outcome_high, decimals, r.span, decimals, bar);
    }
    return out;
}

} // namespace pitplot
