#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pitplot/errors.hpp"

namespace pitplot {

/// Development phases in canonical order.
enum class PhaseId : std::uint8_t { ph1 = 0, ph2 = 1, ph3 = 2, reg = 3 };

std::string_view to_string(PhaseId phase);
std::optional<PhaseId> parse_phase_id(std::string_view text);

struct PhaseSpec {
    PhaseId phase = PhaseId::reg;
    int duration_years = 1;
    double cost_total = 0.0;   // $M, spread uniformly over duration_years
    double success_prob = 1.0; // probability of passing the gate at phase end

    bool operator==(const PhaseSpec&) const = default;
};

struct ProjectSpec {
    std::string id;
    std::string name;
    std::vector<PhaseSpec> phases; // remaining phases, canonical order, ends at Reg
    double peak_sales = 0.0;       // $M per year once on the market

    int development_years() const;
    /// Product of the remaining gate probabilities.
    double success_prob() const;
    const PhaseSpec* find_phase(PhaseId phase) const;

    bool operator==(const ProjectSpec&) const = default;
};

struct PortfolioSpec {
    std::string name;
    std::vector<ProjectSpec> projects;

    const ProjectSpec* find(std::string_view id) const;

    bool operator==(const PortfolioSpec&) const = default;
};

enum class EngineKind : std::uint8_t { monte_carlo, analytic };

std::string_view to_string(EngineKind engine);
std::optional<EngineKind> parse_engine_kind(std::string_view text);

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct SimConfig {
    std::uint64_t iterations = 200'000;
    std::uint64_t seed = kDefaultSeed;
    double discount_rate = 0.0;
    int market_years = 10;
    int ramp_years = 0;
    EngineKind engine = EngineKind::analytic;

    bool operator==(const SimConfig&) const = default;
};

/// All invariant violations of `spec`; empty when valid.
std::vector<Diagnostic> check_portfolio(const PortfolioSpec& spec);
std::vector<Diagnostic> check_config(const SimConfig& config);

/// A portfolio whose invariants have been checked. Only obtainable through
/// validate_portfolio().
class ValidatedPortfolio {
public:
    const PortfolioSpec& spec() const noexcept { return spec_; }
    const std::vector<ProjectSpec>& projects() const noexcept { return spec_.projects; }
    std::size_t size() const noexcept { return spec_.projects.size(); }
    const std::string& name() const noexcept { return spec_.name; }

    bool operator==(const ValidatedPortfolio&) const = default;

private:
    friend ValidatedPortfolio validate_portfolio(PortfolioSpec spec);
    explicit ValidatedPortfolio(PortfolioSpec spec) : spec_(std::move(spec)) {}

    PortfolioSpec spec_;
};

/// Throws ValidationError listing every violation.
ValidatedPortfolio validate_portfolio(PortfolioSpec spec);
void validate_config(const SimConfig& config);

// Numeric field paths on a project: "peak_sales", "phases.<Ph1|Ph2|Ph3|Reg>.<duration|cost|pos>".

/// Throws ValidationError for a malformed path or a phase the project lacks.
double get_field(const ProjectSpec& project, std::string_view path);
/// Writes without validating; durations must be whole numbers.
void set_field(ProjectSpec& project, std::string_view path, double value);

} // namespace pitplot
