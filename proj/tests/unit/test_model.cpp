#include <random>

#include <gtest/gtest.h>

#include "pitplot/io.hpp"
#include "pitplot/model.hpp"
#include "support/fixtures.hpp"

using namespace pitplot;
using pitplot::testing::fixture_path;
using pitplot::testing::project;

namespace {

bool has_diagnostic(const std::vector<Diagnostic>& diags, std::string_view id, std::string_view field,
                    std::string_view text) {
    for (const auto& d : diags) {
        if (d.project_id == id && d.field == field && d.message.find(text) != std::string::npos) return true;
    }
    return false;
}

PortfolioSpec small_portfolio() {
    return {"small",
            {project("A", {{PhaseId::ph3, 2, 100, 0.5}, {PhaseId::reg, 1, 10, 0.9}}, 50),
             project("B", {{PhaseId::reg, 1, 40, 1.0}}, 100)}};
}

} // namespace

TEST(Model, Table1FixtureValidates) {
    const auto portfolio = pitplot::testing::sample();
    ASSERT_EQ(portfolio.size(), 10u);
    const auto* p4 = portfolio.spec().find("P4");
    ASSERT_NE(p4, nullptr);
    ASSERT_EQ(p4->phases.size(), 2u);
    EXPECT_EQ(p4->phases[0].phase, PhaseId::ph3);
    EXPECT_EQ(p4->phases[0].duration_years, 3);
    EXPECT_DOUBLE_EQ(p4->phases[0].cost_total, 500);
    EXPECT_DOUBLE_EQ(p4->phases[0].success_prob, 0.70);
    EXPECT_DOUBLE_EQ(p4->phases[1].success_prob, 0.95);
    EXPECT_DOUBLE_EQ(p4->peak_sales, 400);
    EXPECT_DOUBLE_EQ(portfolio.spec().find("P6")->peak_sales, 1000);
    EXPECT_EQ(portfolio.spec().find("P1")->development_years(), 10);
}

TEST(Model, DuplicateIdRejected) {
    auto spec = small_portfolio();
    spec.projects[1].id = "A";
    const auto diags = check_portfolio(spec);
    EXPECT_TRUE(has_diagnostic(diags, "A", "id", "duplicate id"));
    EXPECT_THROW(validate_portfolio(spec), ValidationError);
}

TEST(Model, OutOfRangeProbabilityNamesProjectPhaseAndField) {
    auto spec = small_portfolio();
    spec.projects[0].phases[0].success_prob = 1.3;
    try {
        validate_portfolio(spec);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        ASSERT_EQ(e.diagnostics().size(), 1u);
        EXPECT_EQ(e.diagnostics()[0].project_id, "A");
        EXPECT_EQ(e.diagnostics()[0].field, "phases.Ph3.pos");
        EXPECT_NE(std::string(e.what()).find("1.3"), std::string::npos);
    }
}

TEST(Model, ZeroProbabilityRejected) {
    auto spec = small_portfolio();
    spec.projects[1].phases[0].success_prob = 0.0;
    EXPECT_TRUE(has_diagnostic(check_portfolio(spec), "B", "phases.Reg.pos", "(0, 1]"));
}

TEST(Model, ReportsEveryViolationNotJustTheFirst) {
    auto spec = small_portfolio();
    spec.projects[0].phases[0].cost_total = -5;
    spec.projects[0].phases[1].duration_years = 0;
    spec.projects[0].peak_sales = -1;
    spec.projects[1].phases.clear();
    const auto diags = check_portfolio(spec);
    EXPECT_TRUE(has_diagnostic(diags, "A", "phases.Ph3.cost", ">= 0"));
    EXPECT_TRUE(has_diagnostic(diags, "A", "phases.Reg.duration", ">= 1"));
    EXPECT_TRUE(has_diagnostic(diags, "A", "peak_sales", ">= 0"));
    EXPECT_TRUE(has_diagnostic(diags, "B", "phases", "empty phase list"));
    EXPECT_EQ(diags.size(), 4u);
}

TEST(Model, PhaseOrderAndTerminalReg) {
    auto spec = small_portfolio();
    std::swap(spec.projects[0].phases[0], spec.projects[0].phases[1]);
    const auto diags = check_portfolio(spec);
    EXPECT_TRUE(has_diagnostic(diags, "A", "phases.Ph3", "order violation"));
    EXPECT_TRUE(has_diagnostic(diags, "A", "phases", "must be Reg"));

    auto repeated = small_portfolio();
    repeated.projects[1].phases.insert(repeated.projects[1].phases.begin(), {PhaseId::reg, 1, 1, 1});
    EXPECT_TRUE(has_diagnostic(check_portfolio(repeated), "B", "phases.Reg", "order violation"));
}

TEST(Model, EmptyPortfolioAndEmptyId) {
    EXPECT_TRUE(has_diagnostic(check_portfolio({"empty", {}}), "", "projects", "no projects"));
    auto spec = small_portfolio();
    spec.projects[0].id.clear();
    EXPECT_TRUE(has_diagnostic(check_portfolio(spec), "#1", "id", "empty id"));
}

TEST(Model, ValidationIsIdempotent) {
    const auto once = validate_portfolio(small_portfolio());
    const auto twice = validate_portfolio(once.spec());
    EXPECT_EQ(once, twice);
    EXPECT_EQ(once.spec(), small_portfolio());
}

TEST(Model, ConfigChecks) {
    SimConfig c;
    EXPECT_TRUE(check_config(c).empty());
    c.iterations = 0;
    c.discount_rate = -0.1;
    c.market_years = 3;
    c.ramp_years = 4;
    const auto diags = check_config(c);
    EXPECT_EQ(diags.size(), 3u);
    EXPECT_THROW(validate_config(c), ValidationError);
}

TEST(Model, FieldPaths) {
    auto p = small_portfolio().projects[0];
    EXPECT_DOUBLE_EQ(get_field(p, "peak_sales"), 50);
    EXPECT_DOUBLE_EQ(get_field(p, "phases.Ph3.pos"), 0.5);
    EXPECT_DOUBLE_EQ(get_field(p, "phases.Reg.cost"), 10);
    EXPECT_DOUBLE_EQ(get_field(p, "phases.Ph3.duration"), 2);
    set_field(p, "phases.Ph3.duration", 4);
    EXPECT_EQ(p.phases[0].duration_years, 4);
    set_field(p, "phases.Reg.pos", 0.8);
    EXPECT_DOUBLE_EQ(p.phases[1].success_prob, 0.8);

    EXPECT_THROW(get_field(p, "phases.Ph1.cost"), ValidationError); // not a remaining phase
    EXPECT_THROW(get_field(p, "phases.Ph9.cost"), ValidationError);
    EXPECT_THROW(get_field(p, "phases.Ph3.colour"), ValidationError);
    EXPECT_THROW(get_field(p, "name"), ValidationError);
    EXPECT_THROW(set_field(p, "phases.Ph3.duration", 2.5), ValidationError);
}

// Byte-level mutations of the fixture document must end in either a valid
// portfolio or a ValidationError, never a crash or another exception type.
TEST(ModelProperty, ValidationIsTotalUnderRandomMutation) {
    const auto original = read_json_file(fixture_path("sample_portfolio.json"));
    std::mt19937_64 rng(7);
    const std::vector<nlohmann::json> replacements = {
        nullptr, true, -1, 0, 1.5, 1e308, "Ph2", "", nlohmann::json::array(), nlohmann::json::object(), 3,
        std::numeric_limits<double>::quiet_NaN()};
    const auto flat = original.flatten();
    std::vector<std::string> keys;
    for (const auto& [k, v] : flat.items()) keys.push_back(k);

    int valid = 0;
    int rejected = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        auto mutated = flat;
        const int edits = 1 + static_cast<int>(rng() % 3);
        for (int e = 0; e < edits; ++e) {
            const auto& key = keys[rng() % keys.size()];
            if (rng() % 5 == 0) {
                mutated.erase(key);
            } else {
                mutated[key] = replacements[rng() % replacements.size()];
            }
        }
        nlohmann::json doc;
        try {
            doc = mutated.unflatten();
        } catch (const nlohmann::json::exception&) {
            continue;
        }
        try {
            validate_portfolio(parse_portfolio(doc));
            ++valid;
        } catch (const ValidationError& e) {
            EXPECT_FALSE(e.diagnostics().empty());
            ++rejected;
        }
    }
    EXPECT_GT(rejected, 100);
    EXPECT_GT(valid + rejected, 1000);
}
