#pragma once

#include <Eigen/Dense>
#include <exception>
#include <string>
#include <vector>

#include "xsalpha/errors.hpp"
#include "xsalpha/optimizer.hpp"
#include "xsalpha/timeseries.hpp"

namespace xsalpha {

struct StrategyConfig {
    int lookback_days = 91;
    int rebalance_every_days = 28;
    double sigma_annual = 0.04;
    BoundSet bounds;
    double cost_spread = 0.0005;  ///< one-way proportional cost per unit traded
    Date start{};
    Date end{};
    SolverOptions solver{};

    void validate() const;
};

/// Error raised while deciding the allocation for one rebalance date.
class RebalanceError : public Error {
public:
    RebalanceError(Date date, const std::exception& cause)
        : Error(format_date(date) + ": " + cause.what()), date_(date), cause_(std::current_exception()) {}
    Date date() const noexcept { return date_; }
    /// The original optimizer or data error.
    std::exception_ptr cause() const noexcept { return cause_; }

private:
    Date date_;
    std::exception_ptr cause_;
};

struct BacktestResult {
    std::vector<std::string> names;  ///< benchmark first
    std::vector<Date> dates;
    std::vector<double> nav;  ///< gross, 1.0 on dates.front()
    std::vector<double> nav_net;
    std::vector<double> benchmark_nav;
    /// Row k: weights on dates[k] after drift, before that day's trade.
    Eigen::MatrixXd weights_history;
    std::vector<Date> rebalance_dates;
    /// Row j: target weights set on rebalance_dates[j].
    Eigen::MatrixXd targets;
    std::vector<double> per_rebalance_turnover;  ///< sum |target - drifted|
    double cost_spread = 0.0;

    std::size_t size() const noexcept { return dates.size(); }
    WeightVector weights_at(std::size_t k) const;

    ReturnSeries strategy_returns() const;
    ReturnSeries strategy_net_returns() const;
    ReturnSeries benchmark_returns() const;
    PriceSeries nav_series() const;
    PriceSeries benchmark_nav_series() const;
};

/// Calendar schedule: the first panel date >= start with a full lookback
/// window, then every `rebalance_every_days` calendar days snapped forward
/// to the next panel date, up to `end`.
std::vector<Date> rebalance_schedule(const AlignedPanel& panel, const StrategyConfig& config);

/// Timing strategy: re-optimise on every scheduled date using data up to
/// and including that date, buy and hold in between. `threads` bounds the
/// number of concurrent optimizer solves; results do not depend on it.
BacktestResult run_backtest(const AlignedPanel& panel, const StrategyConfig& config, unsigned threads = 1);

/// Same engine, rebalancing to fixed weights on the same schedule.
BacktestResult run_static_backtest(const AlignedPanel& panel, const WeightVector& weights,
                                   const StrategyConfig& config);

/// Mean of the daily post-drift weights, renormalised to sum to one.
WeightVector mean_weights(const BacktestResult& result);

/// Applies one day of asset returns to a weight vector (buy and hold).
Eigen::VectorXd drift_weights(const Eigen::VectorXd& weights, const Eigen::VectorXd& asset_returns);

}  // namespace xsalpha
