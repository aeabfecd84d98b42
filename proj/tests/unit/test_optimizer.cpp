#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "xsalpha/errors.hpp"
#include "xsalpha/optimizer.hpp"

using namespace xsalpha;

namespace {

ExcessStats stats_of(const Eigen::VectorXd& index_delta, const Eigen::MatrixXd& index_omega) {
    const auto n = index_delta.size();
    ExcessStats s;
    s.as_of = parse_date("2020-01-01");
    s.names.push_back("bench");
    for (Eigen::Index i = 1; i <= n; ++i) s.names.push_back("idx" + std::to_string(i));
    s.delta = Eigen::VectorXd::Zero(n + 1);
    s.delta.tail(n) = index_delta;
    s.omega = Eigen::MatrixXd::Zero(n + 1, n + 1);
    s.omega.bottomRightCorner(n, n) = index_omega;
    s.window_days = 91;
    s.sample_count = 60;
    return s;
}

// Annual sigma whose daily variance is `daily_var`.
double sigma_for(double daily_var) { return std::sqrt(daily_var * kDaysPerYear); }

void expect_invariants(const SolveOutcome& o, const BoundSet& b, double sigma_annual) {
    const auto& w = o.weights.weights;
    EXPECT_NEAR(w.sum(), 1.0, 1e-8);
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        EXPECT_GE(w(i), b.lower(i) - 1e-8);
        EXPECT_LE(w(i), b.upper(i) + 1e-8);
    }
    EXPECT_LE(o.realized_te_variance, daily_te_variance(sigma_annual) + 1e-10);
}

}  // namespace

TEST(Solve, NonPositiveDeltasKeepTheBenchmark) {
    const auto s = stats_of(Eigen::Vector3d{-0.001, 0.0, -0.0005}, Eigen::Matrix3d::Identity() * 1e-4);
    const auto o = solve(s, BoundSet::long_only(3), 0.04);
    EXPECT_NEAR(o.weights.weights(0), 1.0, 1e-8);
    EXPECT_NEAR(o.weights.weights.tail(3).cwiseAbs().maxCoeff(), 0.0, 1e-8);
    EXPECT_EQ(o.max_excess_return, 0.0);
    EXPECT_NEAR(o.realized_te_variance, 0.0, 1e-16);
}

TEST(Solve, SingleIndexCappedByBound) {
    const auto s = stats_of(Eigen::VectorXd::Constant(1, 0.001), Eigen::MatrixXd::Constant(1, 1, 1e-4));
    const double sigma = sigma_for(4e-4);
    const auto o = solve(s, BoundSet::long_only(1), sigma);
    EXPECT_NEAR(o.max_excess_return, 0.001, 1e-12);
    // The return relaxation of 1e-9 lets the index weight give up 1e-9 / 0.001.
    EXPECT_NEAR(o.weights.weights(1), 1.0, 2e-6);
    EXPECT_NEAR(o.weights.weights(0), 0.0, 2e-6);
    expect_invariants(o, BoundSet::long_only(1), sigma);

    const auto grid = brute_force_solve(s, BoundSet::long_only(1), sigma, 0.01);
    EXPECT_NEAR(grid.weights.weights(1), o.weights.weights(1), 0.01);
    EXPECT_NEAR(grid.max_excess_return, 0.001, 1e-15);
}

TEST(Solve, SingleIndexCappedByTrackingError) {
    // Variance budget 1e-4 with omega 4e-4 allows x <= 0.5.
    const auto s = stats_of(Eigen::VectorXd::Constant(1, 0.002), Eigen::MatrixXd::Constant(1, 1, 4e-4));
    const double sigma = sigma_for(1e-4);
    const auto o = solve(s, BoundSet::long_only(1), sigma);
    EXPECT_NEAR(o.max_excess_return, 0.001, 1e-12);
    // Stage 2 may trade 1e-9 of return for variance: 1e-9 / 0.002 in weight.
    EXPECT_NEAR(o.weights.weights(1), 0.5 - 5e-7, 1e-9);
    EXPECT_EQ(o.stage1_status, "optimal_te_binding");
    expect_invariants(o, BoundSet::long_only(1), sigma);
}

TEST(Solve, TieStagePicksMinimumVariance) {
    const auto s = stats_of(Eigen::Vector2d{0.001, 0.001}, Eigen::Vector2d{0.01, 0.04}.asDiagonal());
    const double sigma = sigma_for(0.01);
    const auto o = solve(s, BoundSet::long_only(2), sigma);
    EXPECT_NEAR(o.max_excess_return, 0.001, 1e-12);
    EXPECT_NEAR(o.weights.weights(0), 0.0, 1e-4);
    EXPECT_NEAR(o.weights.weights(1), 0.8, 1e-4);
    EXPECT_NEAR(o.weights.weights(2), 0.2, 1e-4);
    EXPECT_NEAR(o.realized_te_variance, 0.008, 1e-6);

    const auto grid = brute_force_solve(s, BoundSet::long_only(2), sigma, 0.01);
    EXPECT_NEAR(grid.weights.weights(1), 0.8, 1e-12);
    EXPECT_NEAR(grid.realized_te_variance, 0.008, 1e-12);
}

TEST(Solve, LongShortUsesNegativeWeights) {
    const auto s = stats_of(Eigen::Vector2d{0.001, -0.001}, Eigen::Vector2d{1e-4, 1e-4}.asDiagonal());
    const auto b = BoundSet::long_short(2);
    const auto o = solve(s, b, 0.04);
    EXPECT_GT(o.weights.weights(1), 0.0);
    EXPECT_LT(o.weights.weights(2), 0.0);
    expect_invariants(o, b, 0.04);
    const auto grid = brute_force_solve(s, b, 0.04, 0.01);
    EXPECT_GE(o.max_excess_return, grid.max_excess_return - 1e-9);
}

TEST(Solve, InfeasibleBounds) {
    const auto s = stats_of(Eigen::VectorXd::Constant(1, 0.001), Eigen::MatrixXd::Constant(1, 1, 1e-4));
    BoundSet b = BoundSet::long_only(1);
    b.upper(0) = 0.5;  // benchmark capped below one, index cannot fill the rest
    b.upper(1) = 0.2;
    EXPECT_THROW(solve(s, b, 0.04), InfeasibleError);
    EXPECT_THROW(brute_force_solve(s, b, 0.04, 0.1), InfeasibleError);

    BoundSet inverted = BoundSet::long_only(1);
    inverted.lower(1) = 0.5;
    EXPECT_THROW(solve(s, inverted, 0.04), ValidationError);
}

TEST(Solve, IterationBudgetIsAnError) {
    const auto s = stats_of(Eigen::Vector2d{0.002, 0.001}, Eigen::Vector2d{4e-4, 1e-4}.asDiagonal());
    SolverOptions opt;
    opt.max_iterations_per_stage = 3;
    try {
        solve(s, BoundSet::long_only(2), 0.04, opt);
        FAIL();
    } catch (const ConvergenceError& e) {
        EXPECT_EQ(e.status(), "iteration_limit");
        EXPECT_EQ(e.best_iterate().size(), 3u);
    }
}

TEST(BruteForce, Errors) {
    const auto s = stats_of(Eigen::VectorXd::Constant(5, 0.001), Eigen::MatrixXd::Identity(5, 5) * 1e-4);
    EXPECT_THROW(brute_force_solve(s, BoundSet::long_only(5), 0.04, 0.1), DimensionError);
}

TEST(BruteForce, ZeroDeltaGivesZeroVariance) {
    const auto s = stats_of(Eigen::Vector2d::Zero(), Eigen::Vector2d{1e-4, 2e-4}.asDiagonal());
    const auto grid = brute_force_solve(s, BoundSet::long_only(2), 0.04, 0.05);
    EXPECT_EQ(grid.max_excess_return, 0.0);
    EXPECT_EQ(grid.realized_te_variance, 0.0);
    const auto o = solve(s, BoundSet::long_only(2), 0.04);
    EXPECT_NEAR(o.weights.weights(0), 1.0, 1e-12);
}

TEST(SolveProperties, FeasibleAndNoWorseThanGrid) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 3;
        const auto s = oracle::random_stats(rng, n, 1e-3, 0.01);
        BoundSet b = (trial % 2) ? BoundSet::long_short(n) : BoundSet::long_only(n);
        const double sigma = 0.01 + 0.1 * u(rng);
        const auto o = solve(s, b, sigma);
        expect_invariants(o, b, sigma);
        const double step = 0.02;
        const auto grid = brute_force_solve(s, b, sigma, step);
        EXPECT_GE(o.max_excess_return, grid.max_excess_return - 1e-9);
        const double resolution = s.delta.cwiseAbs().maxCoeff() * n * step * 2.0;
        EXPECT_LE(o.max_excess_return - grid.max_excess_return, resolution + 1e-12);
    }
}

TEST(SolveProperties, ScalingDeltaKeepsWeights) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 3;
        auto s = oracle::random_stats(rng, n, 1e-2, 0.05);
        const auto b = BoundSet::long_only(n);
        const auto base = solve(s, b, 0.1);
        s.delta *= 7.5;
        const auto scaled = solve(s, b, 0.1);
        EXPECT_LE((base.weights.weights - scaled.weights.weights).cwiseAbs().maxCoeff(), 1e-6);
    }
}

TEST(SolveProperties, MaxReturnGrowsWithSigma) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 1 + trial % 4;
        const auto s = oracle::random_stats(rng, n, 1e-3, 0.01);
        const auto b = (trial % 2) ? BoundSet::long_short(n) : BoundSet::long_only(n);
        double previous = -1.0;
        for (double sigma : {0.005, 0.01, 0.02, 0.04, 0.08, 0.5}) {
            const double m = solve(s, b, sigma).max_excess_return;
            EXPECT_GE(m, previous - 1e-13);
            previous = m;
        }
    }
}

TEST(SolveProperties, BenchmarkWeightDoesNotChangeVariance) {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = oracle::random_stats(rng, 3, 1e-3, 0.01);
        Eigen::VectorXd x(4);
        for (int i = 0; i < 4; ++i) x(i) = normal(rng);
        const double before = x.dot(s.omega * x);
        x(0) += normal(rng);
        EXPECT_NEAR(x.dot(s.omega * x), before, 1e-15);
    }
}
