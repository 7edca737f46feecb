#include <benchmark/benchmark.h>

#include "pitplot/analysis.hpp"
#include "pitplot/engine.hpp"
#include "pitplot/io.hpp"
#include "pitplot/render.hpp"

using namespace pitplot;

namespace {

const ValidatedPortfolio& sample() {
    static const auto portfolio =
        validate_portfolio(load_portfolio(std::string(PITPLOT_FIXTURE_DIR) + "/sample_portfolio.json"));
    return portfolio;
}

SimConfig config(EngineKind engine, std::uint64_t iterations) {
    SimConfig c;
    c.engine = engine;
    c.iterations = iterations;
    c.discount_rate = 0.1;
    return c;
}

void BM_SimulatePortfolio(benchmark::State& state) {
    const auto c = config(EngineKind::monte_carlo, static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_portfolio(sample(), c));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 10);
}
BENCHMARK(BM_SimulatePortfolio)->Arg(10000)->Arg(200000)->Unit(benchmark::kMillisecond);

void BM_AnalyticPortfolio(benchmark::State& state) {
    const auto c = config(EngineKind::analytic, 1);
    for (auto _ : state) benchmark::DoNotOptimize(analytic_portfolio(sample(), c));
}
BENCHMARK(BM_AnalyticPortfolio);

void BM_ComputePit(benchmark::State& state) {
    const auto outcomes = evaluate_outcomes(sample(), config(EngineKind::analytic, 1));
    const auto metric = pi_metric();
    for (auto _ : state) benchmark::DoNotOptimize(compute_pit(outcomes, metric));
}
BENCHMARK(BM_ComputePit);

void BM_AnalyzePitMonteCarlo(benchmark::State& state) {
    const auto c = config(EngineKind::monte_carlo, static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(analyze_pit(sample(), c, pi_metric()));
}
BENCHMARK(BM_AnalyzePitMonteCarlo)->Arg(200000)->Unit(benchmark::kMillisecond);

void BM_RenderPit(benchmark::State& state) {
    const auto pit = analyze_pit(sample(), config(EngineKind::analytic, 1), pi_metric());
    for (auto _ : state) benchmark::DoNotOptimize(render_pit(pit));
}
BENCHMARK(BM_RenderPit);

void BM_RenderText(benchmark::State& state) {
    const auto pit = analyze_pit(sample(), config(EngineKind::analytic, 1), pi_metric());
    for (auto _ : state) benchmark::DoNotOptimize(render_text(pit));
}
BENCHMARK(BM_RenderText);

} // namespace
BENCHMARK_MAIN();
