#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "pitplot/analysis.hpp"
#include "pitplot/errors.hpp"
#include "pitplot/io.hpp"
#include "pitplot/render.hpp"
#include "pitplot/tornado.hpp"
#include "support/fixtures.hpp"

using namespace pitplot;
using pitplot::testing::analytic_config;
using pitplot::testing::fixture_path;

namespace {

// Compares against tests/golden/<name>; PITPLOT_UPDATE_GOLDEN=1 rewrites it.
void expect_golden(const std::string& name, const std::string& actual) {
    const std::string path = std::string(PITPLOT_GOLDEN_DIR) + "/" + name;
    if (const char* update = std::getenv("PITPLOT_UPDATE_GOLDEN"); update && std::string(update) == "1") {
        std::ofstream(path, std::ios::binary) << actual;
        return;
    }
    std::ifstream in(path, std::ios::binary);
    ASSERT_TRUE(in) << "missing golden file " << path;
    std::ostringstream expected;
    expected << in.rdbuf();
    EXPECT_EQ(actual, expected.str()) << "golden mismatch: " << name;
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size())) ++n;
    return n;
}

PitData fixture_pit() { return analyze_pit(pitplot::testing::sample(), analytic_config(), pi_metric()); }

std::vector<TornadoRow> cost_rows() {
    return run_scenario(load_tornado_scenario(fixture_path("cost_tornado.json")));
}

PitRow row(std::string id, double excl, double succ) {
    PitRow r;
    r.project_id = std::move(id);
    r.delta_exclusion = excl;
    r.delta_success = succ;
    r.project_metric = 1.0;
    return r;
}

// Pixel width of the rect with the given class inside the row for `id`.
double bar_width(const std::string& svg, const std::string& id, const std::string& cls) {
    const auto start = svg.find("data-project=\"" + id + "\"");
    const auto end = svg.find("</g>", start);
    const std::string group = svg.substr(start, end - start);
    const std::regex re("<rect class=\"" + cls + "\"[^>]*width=\"([0-9.]+)\"");
    std::smatch m;
    if (!std::regex_search(group, m, re)) throw std::runtime_error("bar not found");
    return std::stod(m[1]);
}

} // namespace

TEST(RenderPit, FixtureStructure) {
    const auto svg = render_pit(fixture_pit());
    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
    EXPECT_EQ(count(svg, "class=\"pit-row\""), 10u);
    EXPECT_EQ(count(svg, "<rect class=\"bar exclusion"), 10u);
    EXPECT_EQ(count(svg, "<rect class=\"bar success"), 10u);
    EXPECT_NE(svg.find("PI"), std::string::npos);
}

TEST(RenderPit, RowsFollowPitOrder) {
    const auto pit = fixture_pit();
    const auto svg = render_pit(pit);
    std::size_t last = 0;
    for (const auto& r : pit.rows) {
        const auto pos = svg.find("data-project=\"" + r.project_id + "\"");
        ASSERT_NE(pos, std::string::npos);
        EXPECT_GT(pos, last);
        last = pos;
    }
}

TEST(RenderPit, GoldenSnapshot) { expect_golden("pit_sample.svg", render_pit(fixture_pit())); }

TEST(RenderPit, Deterministic) { EXPECT_EQ(render_pit(fixture_pit()), render_pit(fixture_pit())); }

TEST(RenderPit, ZeroBarIsZeroWidthAtCenter) {
    PitData data{"PI", 2.0, {row("A", 0.0, 0.5), row("B", -0.5, 0.25)}};
    const auto svg = render_pit(data);
    EXPECT_EQ(bar_width(svg, "A", "bar exclusion"), 0.0);
}

TEST(RenderPit, BarLengthsAreAffineInValues) {
    ChartStyle style;
    style.value_half_range = 2.0;
    PitData data{"PI", 1.0, {row("A", -0.3, 0.45), row("B", 0.6, 0.1)}};
    PitData doubled = data;
    for (auto& r : doubled.rows) {
        *r.delta_exclusion *= 2;
        *r.delta_success *= 2;
    }
    const auto a = render_pit(data, style);
    const auto b = render_pit(doubled, style);
    for (const char* id : {"A", "B"}) {
        for (const char* cls : {"bar exclusion", "bar success"}) {
            EXPECT_NEAR(bar_width(b, id, cls), 2 * bar_width(a, id, cls), 0.5) << id << cls;
        }
    }
}

TEST(RenderPit, UnavailableSuccessIsPlaceholder) {
    PitData data{"PI", 1.0, {row("A", -0.3, 0.45), row("B", 0.6, 0.1)}};
    data.rows[1].delta_success.reset();
    data.rows[1].success_available = false;
    const auto svg = render_pit(data);
    EXPECT_EQ(count(svg, "bar success placeholder"), 1u);
    EXPECT_EQ(count(svg, "<rect class=\"bar success\""), 1u);
}

TEST(RenderPit, ErrorsOnEmptyOrBadStyle) {
    EXPECT_THROW(render_pit(PitData{"PI", 1.0, {}}), ValidationError);
    ChartStyle bad;
    bad.width = 0;
    EXPECT_THROW(check_style(bad), ValidationError);
    bad = ChartStyle{};
    bad.decimals = 7;
    EXPECT_THROW(check_style(bad), ValidationError);
    bad = ChartStyle{};
    bad.font_size = -1;
    EXPECT_THROW(render_pit(fixture_pit(), bad), ValidationError);
}

TEST(RenderTornado, CostScenarioStructureAndOrder) {
    const auto rows = cost_rows();
    const auto svg = render_tornado(rows, {}, "total cost");
    EXPECT_EQ(count(svg, "class=\"tornado-row\""), 3u);
    EXPECT_EQ(count(svg, "<rect class=\"bar span\""), 3u);
    EXPECT_LT(svg.find("variable_cost"), svg.find("items_produced"));
    EXPECT_LT(svg.find("items_produced"), svg.find("fixed_cost"));
    expect_golden("tornado_cost.svg", svg);
}

TEST(RenderTornado, SingleVariableCentered) {
    const std::vector<TornadoRow> rows = {{"x", 90, 100, 110, 20}};
    const auto svg = render_tornado(rows);
    const std::regex re("<rect class=\"bar span\" x=\"([0-9.]+)\"[^>]*width=\"([0-9.]+)\"");
    std::smatch m;
    ASSERT_TRUE(std::regex_search(svg, m, re));
    const double x = std::stod(m[1]);
    const double w = std::stod(m[2]);
    const std::regex line("<line class=\"center-line\" x1=\"([0-9.]+)\"");
    std::smatch l;
    ASSERT_TRUE(std::regex_search(svg, l, line));
    EXPECT_NEAR(x + w / 2, std::stod(l[1]), 0.01);
}

TEST(RenderText, PitHeaderAndSnapshot) {
    const auto pit = fixture_pit();
    const auto text = render_text(pit);
    EXPECT_EQ(text.rfind("PIT-plot  metric: PI  center: 3.0650", 0), 0u) << text;
    expect_golden("pit_sample.txt", text);
}

TEST(RenderText, ZeroSpanBarsHaveNoLength) {
    const std::vector<TornadoRow> rows = {{"a", 5, 5, 5, 0}, {"b", 5, 5, 5, 0}};
    const auto text = render_text(rows);
    EXPECT_EQ(text.find('#'), std::string::npos) << text;
    PitData flat{"PI", 1.0, {row("A", 0, 0), row("B", 0, 0)}};
    // Skip the header and legend lines, which name the bar glyphs.
    std::istringstream in(render_text(flat));
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    while (std::getline(in, line)) {
        const auto bar = line.substr(line.find('|'));
        EXPECT_EQ(bar.find_first_of("#="), std::string::npos) << line;
    }
}

TEST(RenderText, TornadoSnapshot) { expect_golden("tornado_cost.txt", render_text(cost_rows(), "total cost")); }

TEST(RenderText, LinesFitWidth) {
    const auto text = render_text(fixture_pit());
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto open = line.find('|');
        if (open == std::string::npos) continue;
        const auto close = line.find('|', open + 1);
        ASSERT_NE(close, std::string::npos) << line;
        EXPECT_LE(close - open - 1, static_cast<std::size_t>(kTextChartColumns + 1)) << line;
    }
}
