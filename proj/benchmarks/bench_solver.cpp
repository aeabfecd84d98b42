#include <benchmark/benchmark.h>

#include <random>

#include "xsalpha/optimizer.hpp"

namespace {

xsalpha::ExcessStats random_stats(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd b(n, n + 1);
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = normal(rng) * 0.004;
    xsalpha::ExcessStats s;
    s.as_of = xsalpha::parse_date("2020-01-01");
    s.names.push_back("bench");
    for (int i = 1; i <= n; ++i) s.names.push_back("idx" + std::to_string(i));
    s.delta = Eigen::VectorXd::Zero(n + 1);
    for (int i = 1; i <= n; ++i) s.delta(i) = normal(rng) * 1e-4;
    s.omega = Eigen::MatrixXd::Zero(n + 1, n + 1);
    s.omega.bottomRightCorner(n, n) = b * b.transpose() / static_cast<double>(n + 1);
    s.window_days = 91;
    s.sample_count = 65;
    return s;
}

void BM_Solve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto s = random_stats(7, n);
    const auto bounds = state.range(1) ? xsalpha::BoundSet::long_short(n) : xsalpha::BoundSet::long_only(n);
    for (auto _ : state) benchmark::DoNotOptimize(xsalpha::solve(s, bounds, 0.04));
}
BENCHMARK(BM_Solve)->ArgsProduct({{1, 5, 10, 20}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_BruteForce(benchmark::State& state) {
    const auto s = random_stats(7, 2);
    const auto bounds = xsalpha::BoundSet::long_only(2);
    for (auto _ : state) benchmark::DoNotOptimize(xsalpha::brute_force_solve(s, bounds, 0.04, 0.01));
}
BENCHMARK(BM_BruteForce)->Unit(benchmark::kMicrosecond);

}  // namespace
