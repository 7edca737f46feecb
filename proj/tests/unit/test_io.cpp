#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "pitplot/analysis.hpp"
#include "pitplot/errors.hpp"
#include "pitplot/io.hpp"
#include "pitplot/report.hpp"
#include "pitplot/tornado.hpp"
#include "support/fixtures.hpp"

using namespace pitplot;
using nlohmann::json;
using pitplot::testing::analytic_config;
using pitplot::testing::fixture_path;

namespace {

json read_fixture(const std::string& name) { return read_json_file(fixture_path(name)); }

std::vector<Diagnostic> diagnostics_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ValidationError& e) {
        return e.diagnostics();
    }
    return {};
}

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("pitplot_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace

TEST(Io, SampleFixtureContents) {
    const auto spec = load_portfolio(fixture_path("sample_portfolio.json"));
    ASSERT_EQ(spec.projects.size(), 10u);
    const auto* p1 = spec.find("P1");
    ASSERT_NE(p1, nullptr);
    EXPECT_EQ(p1->peak_sales, 600);
    ASSERT_EQ(p1->phases.size(), 4u);
    EXPECT_EQ(p1->phases[0].phase, PhaseId::ph1);
    EXPECT_EQ(p1->phases[0].duration_years, 2);
    EXPECT_EQ(p1->phases[0].cost_total, 100);
    EXPECT_EQ(p1->phases[0].success_prob, 0.5);
    const auto* p4 = spec.find("P4");
    ASSERT_EQ(p4->phases.size(), 2u);
    EXPECT_EQ(p4->phases[0].phase, PhaseId::ph3);
    EXPECT_EQ(p4->phases[0].cost_total, 500);
    EXPECT_EQ(p4->phases[0].success_prob, 0.7);
    EXPECT_EQ(p4->phases[1].success_prob, 0.95);
    EXPECT_EQ(p4->peak_sales, 400);
}

TEST(Io, PortfolioRoundTripIsSemanticallyIdentical) {
    const json original = read_fixture("sample_portfolio.json");
    const json again = to_json(parse_portfolio(original));
    EXPECT_EQ(again, original); // json object equality ignores key order
    EXPECT_EQ(parse_portfolio(again), parse_portfolio(original));
}

TEST(Io, PortfolioFieldOrderIndependent) {
    const json a = json::parse(R"({"projects":[{"phases":[{"pos":0.5,"cost":10,"duration":1,"phase":"Reg"}],
                                   "peak_sales":5,"id":"X"}],"name":"n"})");
    const json b = json::parse(R"({"name":"n","projects":[{"id":"X","peak_sales":5,
                                   "phases":[{"phase":"Reg","duration":1,"cost":10,"pos":0.5}]}]})");
    EXPECT_EQ(parse_portfolio(a), parse_portfolio(b));
    EXPECT_EQ(parse_portfolio(a).projects[0].name, "X");
}

TEST(Io, PortfolioShapeErrorsAreCollected) {
    const json doc = json::parse(R"({"projects":[
        {"id":"A","peak_sales":"lots","phases":[{"phase":"Ph9","duration":1.5,"cost":10,"pos":0.5}]},
        {"id":"B","phases":7}, 3]})");
    const auto diags = diagnostics_of([&] { parse_portfolio(doc); });
    ASSERT_GE(diags.size(), 5u);
    auto has = [&](std::string_view id, std::string_view field, std::string_view text) {
        for (const auto& d : diags) {
            if (d.project_id == id && d.field == field && d.message.find(text) != std::string::npos) return true;
        }
        return false;
    };
    EXPECT_TRUE(has("A", "peak_sales", "expected a number"));
    EXPECT_TRUE(has("A", "phases[0].phase", "unknown phase 'Ph9'"));
    EXPECT_TRUE(has("A", "phases[0].duration", "fractional durations are not supported"));
    EXPECT_TRUE(has("B", "phases", "expected an array"));
    EXPECT_TRUE(has("B", "peak_sales", "missing required field"));
    EXPECT_TRUE(has("", "projects[2]", "expected an object"));
}

TEST(Io, ConfigParsing) {
    const auto c = parse_config(read_fixture("config_q10.json"));
    EXPECT_EQ(c.discount_rate, 0.1);
    EXPECT_EQ(c.market_years, 10);
    EXPECT_EQ(c.iterations, 200000u);
    EXPECT_EQ(c.seed, kDefaultSeed);
    EXPECT_EQ(c.engine, EngineKind::analytic);

    SimConfig base;
    base.seed = 7;
    const auto layered = parse_config(json{{"market_years", 12}}, base);
    EXPECT_EQ(layered.seed, 7u);
    EXPECT_EQ(layered.market_years, 12);

    EXPECT_EQ(parse_config(to_json(c)), c);
    EXPECT_EQ(parse_config(json{{"engine", "mc"}}).engine, EngineKind::monte_carlo);
}

TEST(Io, ConfigErrors) {
    const auto diags = diagnostics_of([] {
        parse_config(json{{"colour", 1}, {"seed", -3}, {"iterations", 0}, {"engine", "quantum"}, {"market_years", 2.5}});
    });
    ASSERT_EQ(diags.size(), 5u);
    EXPECT_EQ(diags[0].field, "colour");
    EXPECT_THROW(parse_config(json::array()), ValidationError);
}

TEST(Io, TornadoScenarioRoundTrip) {
    const json original = read_fixture("cost_tornado.json");
    const auto scenario = parse_tornado_scenario(original);
    EXPECT_EQ(scenario.outcome_name, "total cost");
    ASSERT_EQ(scenario.variables.size(), 3u);
    EXPECT_EQ(scenario.variables[2].high, 65.0);
    EXPECT_EQ(to_json(scenario), original);
}

TEST(Io, TornadoScenarioErrors) {
    const json doc = json::parse(R"({"model":{"terms":[["a","ghost"]]},"variables":[{"name":"a","low":1,"base":2}, 4]})");
    const auto diags = diagnostics_of([&] { parse_tornado_scenario(doc); });
    ASSERT_EQ(diags.size(), 3u);
}

TEST(Io, FileErrors) {
    TempDir dir;
    EXPECT_THROW(read_json_file(dir / "missing.json"), IoError);
    std::ofstream(dir / "bad.json") << "{ \"projects\": [ ";
    try {
        read_json_file(dir / "bad.json");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(e.diagnostics()[0].field.find("bad.json"), std::string::npos);
    }
    EXPECT_THROW(write_text_file(dir / "no_such_dir" / "x.txt", "x"), IoError);
    write_text_file(dir / "ok.txt", "hello");
    std::ifstream in(dir / "ok.txt");
    std::string text;
    std::getline(in, text);
    EXPECT_EQ(text, "hello");
}

TEST(Report, NumberFormatting) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(900.0), "900");
    EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Report, PitCsvAndJson) {
    const auto pit = analyze_pit(pitplot::testing::sample(), analytic_config(), pi_metric());
    std::ostringstream csv;
    write_pit_csv(csv, pit);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "metric,PI,center_value," + format_number(pit.center_value));
    std::getline(in, line);
    EXPECT_EQ(line, "rank,project_id,delta_exclusion,delta_success,project_metric,flags");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(line.rfind(std::to_string(rows) + "," + pit.rows[rows - 1].project_id + ",", 0), 0u) << line;
    }
    EXPECT_EQ(rows, 10);

    const json doc = to_json(pit);
    EXPECT_EQ(doc["metric"], "PI");
    EXPECT_EQ(doc["rows"].size(), 10u);
    EXPECT_EQ(doc["rows"][0]["rank"], 1);
    EXPECT_EQ(pit_from_json(doc), pit);
    EXPECT_EQ(pit_from_json(json::parse(doc.dump())), pit);
}

TEST(Report, PitJsonUnavailableValuesAreNull) {
    PitData data{"PI", 1.0, {}};
    PitRow r;
    r.project_id = "A";
    r.delta_exclusion = 0.5;
    r.success_available = false;
    r.flags = {"success_unavailable: success bar not estimable for project A"};
    data.rows.push_back(r);
    const json doc = to_json(data);
    EXPECT_TRUE(doc["rows"][0]["delta_success"].is_null());
    EXPECT_TRUE(doc["rows"][0]["project_metric"].is_null());
    EXPECT_EQ(pit_from_json(doc), data);
}

TEST(Report, TornadoCsv) {
    const auto rows = run_scenario(load_tornado_scenario(fixture_path("cost_tornado.json")));
    std::ostringstream out;
    write_tornado_csv(out, rows);
    EXPECT_EQ(out.str(),
              "rank,variable,outcome_low,outcome_base,outcome_high,span\n"
              "1,variable_cost,840,900,960,120\n"
              "2,items_produced,850,900,950,100\n"
              "3,fixed_cost,870,900,930,60\n");
    const json doc = to_json(std::span<const TornadoRow>(rows));
    EXPECT_EQ(doc.size(), 3u);
    EXPECT_EQ(doc[0]["variable"], "variable_cost");
}
