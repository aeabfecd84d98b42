#include <benchmark/benchmark.h>

#include "xsalpha/analytics.hpp"
#include "xsalpha/backtest.hpp"
#include "xsalpha/datagen.hpp"

namespace {

xsalpha::AlignedPanel panel(int n) {
    auto spec = xsalpha::SynthSpec::uniform(3, 4000, n, 0.0, 0.004, 0.1, 0.2);
    spec.benchmark_vol = 0.01;
    return xsalpha::generate(spec);
}

xsalpha::StrategyConfig strategy(const xsalpha::AlignedPanel& p, int every) {
    xsalpha::StrategyConfig c;
    c.rebalance_every_days = every;
    c.bounds = xsalpha::BoundSet::long_only(p.index_count());
    c.start = p.dates().front();
    c.end = p.dates().back();
    return c;
}

void BM_Backtest(benchmark::State& state) {
    const auto p = panel(static_cast<int>(state.range(0)));
    const auto c = strategy(p, static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(xsalpha::run_backtest(p, c, static_cast<unsigned>(state.range(2))));
}
BENCHMARK(BM_Backtest)->ArgsProduct({{5, 10}, {7, 28}, {1, 4}})->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
    auto spec = xsalpha::SynthSpec::uniform(3, 4000, static_cast<int>(state.range(0)), 0.0, 0.004, 0.1, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(xsalpha::generate(spec));
}
BENCHMARK(BM_Generate)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Report(benchmark::State& state) {
    const auto p = panel(5);
    const auto c = strategy(p, 28);
    const auto r = xsalpha::run_backtest(p, c);
    const auto s = xsalpha::run_static_backtest(p, xsalpha::mean_weights(r), c);
    for (auto _ : state) benchmark::DoNotOptimize(xsalpha::build_report(r, p, &s));
}
BENCHMARK(BM_Report)->Unit(benchmark::kMillisecond);

}  // namespace
