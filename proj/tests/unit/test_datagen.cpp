#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "xsalpha/datagen.hpp"
#include "xsalpha/errors.hpp"

using namespace xsalpha;

namespace {

std::string serialize(const AlignedPanel& p) {
    std::ostringstream out;
    write_panel(out, p);
    return out.str();
}

}  // namespace

TEST(Datagen, ZeroVolsAndDriftsGiveConstantSeries) {
    auto spec = SynthSpec::uniform(9, 50, 3, 0.0, 0.0, 0.0);
    spec.benchmark_drift = 0.0;
    spec.benchmark_vol = 0.0;
    const auto p = generate(spec);
    ASSERT_EQ(p.index_count(), 3u);
    ASSERT_EQ(p.dates().size(), 50u);
    for (std::size_t i = 0; i <= p.index_count(); ++i) {
        SCOPED_TRACE(i);
        for (double v : p.series(i).levels()) EXPECT_DOUBLE_EQ(v, p.series(i).levels().front());
    }
}

TEST(Datagen, NamesAndWeekdayDates) {
    const auto p = generate(SynthSpec::uniform(1, 20, 2, 0.0, 0.01, 0.0));
    EXPECT_EQ(p.names(), (std::vector<std::string>{"benchmark", "index_1", "index_2"}));
    EXPECT_EQ(p.dates().front(), parse_date("2000-01-03"));
    for (Date d : p.dates()) {
        const std::chrono::weekday wd{d};
        EXPECT_NE(wd, std::chrono::Saturday);
        EXPECT_NE(wd, std::chrono::Sunday);
    }
    auto spec = SynthSpec::uniform(1, 20, 2, 0.0, 0.01, 0.0);
    spec.weekdays_only = false;
    const auto cal = generate(spec);
    EXPECT_EQ(cal.dates().back() - cal.dates().front(), std::chrono::days{19});
}

TEST(Datagen, SameSeedIsByteIdentical) {
    auto spec = SynthSpec::uniform(77, 400, 4, 0.0001, 0.005, 0.2, 0.4);
    spec.benchmark_vol = 0.012;
    EXPECT_EQ(serialize(generate(spec)), serialize(generate(spec)));
    auto other = spec;
    other.seed = 78;
    EXPECT_NE(serialize(generate(spec)), serialize(generate(other)));
}

TEST(Datagen, Ar1Autocorrelation) {
    const auto spec = SynthSpec::uniform(5, 10'000, 1, 0.0, 0.005, 0.2);
    const Eigen::MatrixXd a = generate_excess_paths(spec);
    const std::vector<double> col(a.col(0).data(), a.col(0).data() + a.rows());
    EXPECT_NEAR(oracle::lag1_autocorrelation(col), 0.2, 0.05);
}

TEST(Datagen, ShockCorrelation) {
    const auto spec = SynthSpec::uniform(8, 20'000, 2, 0.0, 0.005, 0.0, 0.6);
    const Eigen::MatrixXd a = generate_excess_paths(spec);
    const Eigen::MatrixXd cov = oracle::gram_covariance(a);
    EXPECT_NEAR(cov(0, 1) / std::sqrt(cov(0, 0) * cov(1, 1)), 0.6, 0.03);
    EXPECT_NEAR(std::sqrt(cov(0, 0)), 0.005, 0.0002);
}

TEST(Datagen, LevelsReproduceExcessPaths) {
    auto spec = SynthSpec::uniform(21, 300, 3, 0.0002, 0.004, 0.3, 0.2);
    spec.benchmark_drift = 0.0003;
    spec.benchmark_vol = 0.01;
    const auto p = generate(spec);
    const Eigen::MatrixXd a = generate_excess_paths(spec);
    ASSERT_EQ(a.rows(), 299);
    for (std::size_t i = 1; i <= 3; ++i) {
        const auto ratio = excess_ratio(p.series(i), p.benchmark());
        const auto& lv = ratio.levels();
        for (std::size_t t = 1; t < lv.size(); ++t) {
            const double observed = lv[t] / lv[t - 1] - 1.0;
            const double expected = a(static_cast<Eigen::Index>(t - 1), static_cast<Eigen::Index>(i - 1));
            EXPECT_NEAR(observed, expected, 1e-10 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST(Datagen, BenchmarkDriftMatchesGeometricMean) {
    auto spec = SynthSpec::uniform(3, 20'000, 1, 0.0, 0.001, 0.0);
    spec.benchmark_drift = 0.0004;
    spec.benchmark_vol = 0.01;
    const auto p = generate(spec);
    const auto& lv = p.benchmark().levels();
    const double mean_log = std::log(lv.back() / lv.front()) / static_cast<double>(lv.size() - 1);
    EXPECT_NEAR(mean_log, 0.0004 - 0.5 * 0.01 * 0.01, 3.0 * 0.01 / std::sqrt(20'000.0));
}

TEST(Datagen, Validation) {
    auto bad = SynthSpec::uniform(1, 1, 1, 0.0, 0.01, 0.0);
    EXPECT_THROW(generate(bad), ValidationError);
    bad = SynthSpec::uniform(1, 10, 1, 0.0, 0.01, 1.0);
    EXPECT_THROW(generate(bad), ValidationError);
    bad = SynthSpec::uniform(1, 10, 1, 0.0, -0.01, 0.0);
    EXPECT_THROW(generate(bad), ValidationError);
    bad = SynthSpec::uniform(1, 10, 2, 0.0, 0.01, 0.0);
    bad.correlation = Eigen::Matrix2d{{1.0, 1.5}, {1.5, 1.0}};
    EXPECT_THROW(generate(bad), ValidationError);
    bad = SynthSpec::uniform(1, 10, 2, 0.0, 0.01, 0.0);
    bad.excess_drift.resize(1);
    EXPECT_THROW(generate(bad), ValidationError);
}

TEST(PortableNormal, MomentsAndDeterminism) {
    PortableNormal a(42), b(42);
    double sum = 0.0, sq = 0.0;
    const int n = 200'000;
    for (int k = 0; k < n; ++k) {
        const double x = a();
        EXPECT_EQ(x, b());
        sum += x;
        sq += x * x;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.01);
}
