#pragma once

#include <optional>

#include "xsalpha/backtest.hpp"
#include "xsalpha/timeseries.hpp"

namespace xsalpha {

/// Mean daily return x 365.25.
double annualized_return(const ReturnSeries& daily);
/// Population standard deviation of daily returns x sqrt(365.25).
double annualized_vol(const ReturnSeries& daily);
/// annualized_return / annualized_vol; 0 for a flat series, DegenerateRatioError
/// when the volatility is zero but the return is not.
double sharpe_ratio(const ReturnSeries& daily);

struct ActiveStats {
    double alpha_annual = 0.0;
    double te_annual = 0.0;
    double ir = 0.0;
};

/// Alpha, tracking error and information ratio of strategy against
/// benchmark from daily differences.
ActiveStats alpha_and_te(const ReturnSeries& strategy, const ReturnSeries& benchmark);

/// Worst fall of strategy/benchmark from its running maximum, as a
/// nonpositive fraction.
double mrdd(const PriceSeries& strategy_nav, const PriceSeries& benchmark_nav);

/// Annual cost estimate from annualised turnover and a one-way spread.
double ter(double turnover_annual, double cost_spread);

/// Sum of per-rebalance turnover scaled to a year of calendar time.
double turnover_annual(const BacktestResult& result);

/// One-sided one-sample t-test p-value for mean(strategy - reference) > 0.
double alpha_significance(const ReturnSeries& strategy, const ReturnSeries& reference);

/// Upper tail of Student's t with `dof` degrees of freedom.
double student_t_upper_tail(double t, double dof);

struct AllocationSplit {
    double allocation = 0.0;
    double active = 0.0;
};

/// Splits alpha into what the mean weights would have earned from each
/// index's average excess return over the benchmark, and the remainder.
AllocationSplit allocation_active_split(const BacktestResult& result, const AlignedPanel& panel);

struct ReturnStats {
    double annual_return = 0.0;
    double annual_vol = 0.0;
    double sharpe = 0.0;
};

struct VsMeanReport {
    ReturnStats static_stats;
    double alpha_annual = 0.0;
    double te_annual = 0.0;
    double ir = 0.0;
    double pvalue = 0.0;
};

/// Every reported statistic of one strategy run. Ratios and p-values that
/// are undefined for the inputs are NaN.
struct PerformanceReport {
    double annual_return = 0.0;
    double annual_vol = 0.0;
    double sharpe = 0.0;
    ReturnStats benchmark;
    double alpha_annual = 0.0;
    double te_annual = 0.0;
    double ir = 0.0;
    double mrdd = 0.0;
    double ter = 0.0;
    double turnover_annual = 0.0;
    double alpha_pvalue = 0.0;
    double allocation_component = 0.0;
    double active_component = 0.0;
    WeightVector mean_weights;
    std::optional<VsMeanReport> vs_mean;
};

PerformanceReport build_report(const BacktestResult& result, const AlignedPanel& panel,
                               const BacktestResult* static_result = nullptr);

}  // namespace xsalpha
