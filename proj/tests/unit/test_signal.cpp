#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "xsalpha/errors.hpp"
#include "xsalpha/signal.hpp"

using namespace xsalpha;

namespace {

// Benchmark flat at 100; index levels compound the given excess returns.
AlignedPanel panel_from_alphas(const std::vector<std::vector<double>>& alphas) {
    const std::size_t days = alphas[0].size() + 1;
    std::vector<std::vector<double>> cols{std::vector<double>(days, 100.0)};
    for (const auto& a : alphas) {
        std::vector<double> lv{100.0};
        for (double x : a) lv.push_back(lv.back() * (1.0 + x));
        cols.push_back(lv);
    }
    return oracle::make_panel(cols);
}

}  // namespace

TEST(ExcessStats, HandExample) {
    const auto p = panel_from_alphas({{0.01, -0.01, 0.02}});
    const auto s = compute_excess_stats(p, p.dates().back(), 10);
    EXPECT_EQ(s.sample_count, 3u);
    EXPECT_NEAR(s.delta(1), 0.0066667, 5e-8);
    EXPECT_NEAR(s.omega(1, 1), 1.5556e-4, 5e-9);
    EXPECT_EQ(s.delta(0), 0.0);
    EXPECT_TRUE(s.omega.row(0).isZero(0.0));
    EXPECT_TRUE(s.omega.col(0).isZero(0.0));
}

TEST(ExcessStats, ConstantAlpha) {
    const auto p = panel_from_alphas({std::vector<double>(20, 0.003), std::vector<double>(20, -0.001)});
    const auto s = compute_excess_stats(p, p.dates().back(), 15);
    EXPECT_NEAR(s.delta(1), 0.003, 1e-15);
    EXPECT_NEAR(s.delta(2), -0.001, 1e-15);
    EXPECT_NEAR(s.omega(1, 1), 0.0, 1e-20);
    EXPECT_NEAR(s.omega(2, 2), 0.0, 1e-20);
}

TEST(ExcessStats, CalendarWindowIsHalfOpen) {
    // Dates 2020-01-01..; window of 3 calendar days ending on day 6 covers days 4, 5, 6.
    const auto p = panel_from_alphas({{0.5, 0.5, 0.5, 0.01, 0.02, 0.03}});
    const auto s = compute_excess_stats(p, p.dates()[6], 3);
    EXPECT_EQ(s.sample_count, 3u);
    EXPECT_NEAR(s.delta(1), 0.02, 1e-12);
}

TEST(ExcessStats, UsesOnlyDataUpToAsOf) {
    const auto p = panel_from_alphas({{0.01, 0.02, 0.03, 0.9, 0.9}});
    const auto s = compute_excess_stats(p, p.dates()[3], 30);
    EXPECT_EQ(s.sample_count, 3u);
    EXPECT_NEAR(s.delta(1), 0.02, 1e-12);
}

TEST(ExcessStats, Errors) {
    const auto p = panel_from_alphas({{0.01, 0.02, 0.03}});
    EXPECT_THROW(compute_excess_stats(p, parse_date("1999-01-01"), 10), DateError);
    try {
        compute_excess_stats(p, p.dates()[1], 10);
        FAIL();
    } catch (const InsufficientDataError& e) {
        EXPECT_EQ(e.found(), 1u);
    }
}

TEST(ExcessStats, GramFormulaMatchesTwoPass) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0.0004, 0.006);
    for (int trial = 0; trial < 25; ++trial) {
        Eigen::MatrixXd samples(70, 4);
        for (Eigen::Index k = 0; k < samples.rows(); ++k)
            for (Eigen::Index i = 0; i < samples.cols(); ++i) samples(k, i) = normal(rng);
        const auto s = excess_stats_from_samples(samples, {"b", "1", "2", "3", "4"}, parse_date("2020-01-01"), 91);
        const Eigen::MatrixXd gram = oracle::gram_covariance(samples);
        EXPECT_LE((s.omega.bottomRightCorner(4, 4) - gram).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(ExcessStats, ShiftAndScaleLaws) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> normal(0.0, 0.01);
    Eigen::MatrixXd samples(50, 3);
    for (Eigen::Index k = 0; k < samples.rows(); ++k)
        for (Eigen::Index i = 0; i < samples.cols(); ++i) samples(k, i) = normal(rng);
    const std::vector<std::string> names{"b", "x", "y", "z"};
    const Date d = parse_date("2020-01-01");
    const auto base = excess_stats_from_samples(samples, names, d, 91);

    const auto shifted = excess_stats_from_samples((samples.array() + 0.003).matrix(), names, d, 91);
    EXPECT_LE((shifted.omega - base.omega).cwiseAbs().maxCoeff(), 1e-16);
    for (Eigen::Index i = 1; i <= 3; ++i) EXPECT_NEAR(shifted.delta(i) - base.delta(i), 0.003, 1e-15);
    EXPECT_EQ(shifted.delta(0), 0.0);

    const double scale = 3.0;
    const auto scaled = excess_stats_from_samples(samples * scale, names, d, 91);
    EXPECT_LE((scaled.delta - scale * base.delta).cwiseAbs().maxCoeff(), 1e-16);
    EXPECT_LE((scaled.omega - scale * scale * base.omega).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(ExcessStats, OmegaIsSymmetricPsd) {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> normal(0.0, 0.01);
    // Fewer observations than indices: rank deficient but PSD.
    Eigen::MatrixXd samples(3, 6);
    for (Eigen::Index k = 0; k < samples.rows(); ++k)
        for (Eigen::Index i = 0; i < samples.cols(); ++i) samples(k, i) = normal(rng);
    const auto s = excess_stats_from_samples(samples, {"b", "1", "2", "3", "4", "5", "6"}, parse_date("2020-01-01"), 91);
    EXPECT_TRUE(s.omega.isApprox(s.omega.transpose(), 0.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.omega);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
}

TEST(RepairPsd, ClipsTinyNegativesAndRejectsLargeOnes) {
    Eigen::MatrixXd om = Eigen::MatrixXd::Zero(3, 3);
    om.bottomRightCorner(2, 2) << 1.0, 1.0, 1.0, 1.0 - 1e-12;
    repair_psd(om);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(om.bottomRightCorner(2, 2));
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-15);
    EXPECT_TRUE(om.row(0).isZero(0.0));

    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(3, 3);
    bad.bottomRightCorner(2, 2) << 1.0, 2.0, 2.0, 1.0;
    EXPECT_THROW(repair_psd(bad), ValidationError);
}
