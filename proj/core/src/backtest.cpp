#include "xsalpha/backtest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>

#include "xsalpha/signal.hpp"

namespace xsalpha {

void StrategyConfig::validate() const {
    if (!(start < end)) throw ConfigError("start must be before end");
    if (lookback_days < 2) throw ConfigError("lookback_days must be at least 2");
    if (rebalance_every_days < 1) throw ConfigError("rebalance_every_days must be at least 1");
    if (!(sigma_annual > 0.0)) throw ConfigError("sigma_annual must be positive");
    if (!(cost_spread >= 0.0)) throw ConfigError("cost_spread must be nonnegative");
    bounds.validate();
}

WeightVector BacktestResult::weights_at(std::size_t k) const {
    return {names, weights_history.row(static_cast<Eigen::Index>(k)).transpose()};
}

namespace {

ReturnSeries returns_of(const std::string& name, const std::vector<Date>& dates, const std::vector<double>& nav) {
    return daily_returns(PriceSeries(name, dates, nav));
}

}  // namespace

ReturnSeries BacktestResult::strategy_returns() const { return returns_of("strategy", dates, nav); }
ReturnSeries BacktestResult::strategy_net_returns() const { return returns_of("strategy_net", dates, nav_net); }
ReturnSeries BacktestResult::benchmark_returns() const { return returns_of(names.at(0), dates, benchmark_nav); }
PriceSeries BacktestResult::nav_series() const { return PriceSeries("strategy", dates, nav); }
PriceSeries BacktestResult::benchmark_nav_series() const { return PriceSeries(names.at(0), dates, benchmark_nav); }

Eigen::VectorXd drift_weights(const Eigen::VectorXd& weights, const Eigen::VectorXd& asset_returns) {
    const Eigen::VectorXd grown = weights.cwiseProduct((1.0 + asset_returns.array()).matrix());
    const double total = grown.sum();
    if (!(total > 0.0)) throw ValidationError("portfolio value fell to zero or below");
    return grown / total;
}

std::vector<Date> rebalance_schedule(const AlignedPanel& panel, const StrategyConfig& config) {
    config.validate();
    const auto& ds = panel.dates();
    const Date earliest = ds.front() + std::chrono::days{config.lookback_days};
    auto it = std::lower_bound(ds.begin(), ds.end(), std::max(config.start, earliest));
    // The window must also hold at least two excess-return observations.
    while (it != ds.end() && *it <= config.end) {
        const Date window_start = *it - std::chrono::days{config.lookback_days};
        const auto in_window = (it - std::upper_bound(ds.begin(), it, window_start)) + 1;
        // in_window counts panel dates in the window, each of which carries a
        // return because the window starts after the first panel date.
        if (in_window >= 2) break;
        ++it;
    }
    if (it == ds.end() || *it > config.end) {
        throw InsufficientDataError("no panel date in [" + format_date(config.start) + ", " +
                                        format_date(config.end) + "] has a full " +
                                        std::to_string(config.lookback_days) + "-day lookback window",
                                    0);
    }
    std::vector<Date> schedule{*it};
    const Date first = *it;
    for (long step = 1;; ++step) {
        const Date nominal = first + std::chrono::days{step * config.rebalance_every_days};
        if (nominal > config.end) break;
        const auto snapped = std::lower_bound(ds.begin(), ds.end(), nominal);
        if (snapped == ds.end() || *snapped > config.end) break;
        if (*snapped != schedule.back()) schedule.push_back(*snapped);
    }
    return schedule;
}

namespace {

using TargetFn = std::function<Eigen::VectorXd(Date)>;

Eigen::MatrixXd decide_targets(const std::vector<Date>& schedule, const TargetFn& target, std::size_t width,
                               unsigned threads) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(schedule.size()), static_cast<Eigen::Index>(width));
    std::vector<std::exception_ptr> errors(schedule.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < schedule.size(); j = next++) {
            try {
                try {
                    out.row(static_cast<Eigen::Index>(j)) = target(schedule[j]).transpose();
                } catch (const std::exception& e) {
                    throw RebalanceError(schedule[j], e);
                }
            } catch (...) {
                errors[j] = std::current_exception();
            }
        }
    };
    const unsigned pool = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(schedule.size())));
    if (pool == 1) {
        worker();
    } else {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < pool; ++t) workers.emplace_back(worker);
    }
    // Report the earliest failing date regardless of scheduling.
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

BacktestResult simulate(const AlignedPanel& panel, const StrategyConfig& config, const TargetFn& target,
                        unsigned threads) {
    const auto schedule = rebalance_schedule(panel, config);
    const auto& ds = panel.dates();
    const std::size_t first = static_cast<std::size_t>(std::lower_bound(ds.begin(), ds.end(), config.start) - ds.begin());
    const std::size_t last = static_cast<std::size_t>(std::upper_bound(ds.begin(), ds.end(), config.end) - ds.begin());
    const std::size_t width = panel.index_count() + 1;
    const auto m = static_cast<Eigen::Index>(width);

    BacktestResult r;
    r.names = panel.names();
    r.cost_spread = config.cost_spread;
    r.rebalance_dates = schedule;
    r.targets = decide_targets(schedule, target, width, threads);
    r.dates.assign(ds.begin() + static_cast<std::ptrdiff_t>(first), ds.begin() + static_cast<std::ptrdiff_t>(last));
    const std::size_t days = r.dates.size();
    r.nav.resize(days);
    r.nav_net.resize(days);
    r.benchmark_nav.resize(days);
    r.weights_history.resize(static_cast<Eigen::Index>(days), m);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    w(0) = 1.0;
    Eigen::VectorXd asset_returns(m);
    std::size_t next_rebalance = 0;
    const double bench0 = panel.benchmark().levels()[first];
    for (std::size_t k = 0; k < days; ++k) {
        const std::size_t p = first + k;
        if (k == 0) {
            r.nav[0] = 1.0;
            r.nav_net[0] = 1.0;
        } else {
            for (std::size_t i = 0; i < width; ++i) {
                const auto& lv = panel.series(i).levels();
                asset_returns(static_cast<Eigen::Index>(i)) = lv[p] / lv[p - 1] - 1.0;
            }
            const double day_return = w.dot(asset_returns);
            r.nav[k] = r.nav[k - 1] * (1.0 + day_return);
            r.nav_net[k] = r.nav_net[k - 1] * (1.0 + day_return);
            w = drift_weights(w, asset_returns);
        }
        r.benchmark_nav[k] = panel.benchmark().levels()[p] / bench0;
        r.weights_history.row(static_cast<Eigen::Index>(k)) = w.transpose();

        if (next_rebalance < schedule.size() && schedule[next_rebalance] == r.dates[k]) {
            const Eigen::VectorXd target = r.targets.row(static_cast<Eigen::Index>(next_rebalance)).transpose();
            const double turnover = (target - w).cwiseAbs().sum();
            r.per_rebalance_turnover.push_back(turnover);
            r.nav_net[k] *= 1.0 - config.cost_spread * turnover;
            w = target;
            ++next_rebalance;
        }
        if (!(r.nav[k] > 0.0) || !(r.nav_net[k] > 0.0)) {
            throw ValidationError("strategy value fell to zero or below on " + format_date(r.dates[k]));
        }
    }
    return r;
}

}  // namespace

BacktestResult run_backtest(const AlignedPanel& panel, const StrategyConfig& config, unsigned threads) {
    config.validate();
    if (config.bounds.size() != panel.index_count() + 1) {
        throw ConfigError("bounds cover " + std::to_string(config.bounds.size()) + " positions, panel has " +
                          std::to_string(panel.index_count() + 1));
    }
    const ExcessReturnPanel excess(panel);
    auto target = [&](Date d) -> Eigen::VectorXd {
        const ExcessStats stats = compute_excess_stats(excess, d, config.lookback_days);
        return solve(stats, config.bounds, config.sigma_annual, config.solver).weights.weights;
    };
    return simulate(panel, config, target, threads);
}

BacktestResult run_static_backtest(const AlignedPanel& panel, const WeightVector& weights,
                                   const StrategyConfig& config) {
    config.validate();
    if (weights.names != panel.names()) throw ConfigError("static weights do not match the panel's names");
    if (std::abs(weights.sum() - 1.0) > 1e-8) throw ValidationError("static weights must sum to one");
    const Eigen::VectorXd fixed = weights.weights;
    return simulate(panel, config, [&](Date) { return fixed; }, 1);
}

WeightVector mean_weights(const BacktestResult& result) {
    if (result.weights_history.rows() == 0) throw EmptyInputError("weights history is empty");
    Eigen::VectorXd mean = result.weights_history.colwise().mean().transpose();
    mean /= mean.sum();
    return {result.names, mean};
}

}  // namespace xsalpha
