#include "xsalpha/analytics.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "xsalpha/errors.hpp"

namespace xsalpha {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v) {
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

// Below this, a standard deviation is treated as exactly zero relative to the mean.
bool negligible(double spread, double level) { return spread <= 1e-12 * std::abs(level); }

std::vector<double> differences(const ReturnSeries& a, const ReturnSeries& b) {
    if (a.dates() != b.dates()) throw AlignmentError("'" + a.name() + "' and '" + b.name() + "' have different dates");
    std::vector<double> d(a.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = a.values()[k] - b.values()[k];
    return d;
}

}  // namespace

double annualized_return(const ReturnSeries& daily) {
    if (daily.size() == 0) throw EmptyInputError(daily.name() + ": no returns");
    return mean_of(daily.values()) * kDaysPerYear;
}

double annualized_vol(const ReturnSeries& daily) {
    if (daily.size() < 2) throw InsufficientDataError(daily.name() + ": volatility needs 2 returns", daily.size());
    return population_std(daily.values()) * std::sqrt(kDaysPerYear);
}

double sharpe_ratio(const ReturnSeries& daily) {
    const double ret = annualized_return(daily);
    const double vol = annualized_vol(daily);
    if (vol == 0.0 || negligible(vol, ret)) {
        if (ret == 0.0) return 0.0;
        throw DegenerateRatioError(daily.name() + ": zero volatility with nonzero return");
    }
    return ret / vol;
}

ActiveStats alpha_and_te(const ReturnSeries& strategy, const ReturnSeries& benchmark) {
    const auto d = differences(strategy, benchmark);
    if (d.empty()) throw EmptyInputError("no returns to compare");
    ActiveStats s;
    s.alpha_annual = mean_of(d) * kDaysPerYear;
    s.te_annual = population_std(d) * std::sqrt(kDaysPerYear);
    if (s.te_annual == 0.0 || negligible(s.te_annual, s.alpha_annual)) {
        if (s.alpha_annual != 0.0) {
            throw DegenerateRatioError("tracking error is zero while alpha is " + format_real(s.alpha_annual));
        }
        s.te_annual = 0.0;
        s.ir = 0.0;
        return s;
    }
    s.ir = s.alpha_annual / s.te_annual;
    return s;
}

double mrdd(const PriceSeries& strategy_nav, const PriceSeries& benchmark_nav) {
    const auto q = excess_ratio(strategy_nav, benchmark_nav);
    double peak = 0.0;
    double worst = 0.0;
    for (double v : q.levels()) {
        peak = std::max(peak, v);
        worst = std::min(worst, v / peak - 1.0);
    }
    return worst;
}

double ter(double turnover_annual, double cost_spread) { return turnover_annual * cost_spread; }

double turnover_annual(const BacktestResult& result) {
    if (result.dates.size() < 2) throw InsufficientDataError("turnover needs at least 2 dates", result.dates.size());
    const double total = std::accumulate(result.per_rebalance_turnover.begin(), result.per_rebalance_turnover.end(), 0.0);
    const double days = static_cast<double>((result.dates.back() - result.dates.front()).count());
    return total * kDaysPerYear / days;
}

double student_t_upper_tail(double t, double dof) {
    const boost::math::students_t dist(dof);
    return boost::math::cdf(boost::math::complement(dist, t));
}

double alpha_significance(const ReturnSeries& strategy, const ReturnSeries& reference) {
    const auto d = differences(strategy, reference);
    if (d.size() < 30) throw InsufficientDataError("significance test needs at least 30 observations", d.size());
    if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) {
        throw DegenerateTestError("difference series is identically zero");
    }
    const double n = static_cast<double>(d.size());
    const double m = mean_of(d);
    double ss = 0.0;
    for (double x : d) ss += (x - m) * (x - m);
    const double sample_std = std::sqrt(ss / (n - 1.0));
    if (sample_std == 0.0 || negligible(sample_std, m)) return m > 0.0 ? 0.0 : 1.0;
    const double t = m / (sample_std / std::sqrt(n));
    return std::clamp(student_t_upper_tail(t, n - 1.0), 0.0, 1.0);
}

AllocationSplit allocation_active_split(const BacktestResult& result, const AlignedPanel& panel) {
    if (result.dates.size() < 2) throw EmptyInputError("allocation split needs at least 2 dates");
    if (result.names != panel.names()) throw AlignmentError("backtest and panel cover different series");
    const auto first = panel.find_date(result.dates.front());
    if (first == AlignedPanel::npos || first + result.dates.size() > panel.dates().size() ||
        panel.dates()[first + result.dates.size() - 1] != result.dates.back()) {
        throw AlignmentError("backtest dates are not a contiguous run of panel dates");
    }
    const WeightVector mw = mean_weights(result);
    const auto& bench = panel.benchmark().levels();
    double allocation = 0.0;
    for (std::size_t i = 1; i <= panel.index_count(); ++i) {
        const auto& lv = panel.series(i).levels();
        double sum = 0.0;
        for (std::size_t k = first + 1; k < first + result.dates.size(); ++k) {
            sum += (lv[k] / lv[k - 1] - 1.0) - (bench[k] / bench[k - 1] - 1.0);
        }
        const double annual_excess = sum / static_cast<double>(result.dates.size() - 1) * kDaysPerYear;
        allocation += mw.weights(static_cast<Eigen::Index>(i)) * annual_excess;
    }
    const double alpha = mean_of(differences(result.strategy_returns(), result.benchmark_returns())) * kDaysPerYear;
    return {allocation, alpha - allocation};
}

namespace {

template <class F>
double or_nan(F&& f) {
    try {
        return f();
    } catch (const DegenerateRatioError&) {
        return kNaN;
    } catch (const DegenerateTestError&) {
        return kNaN;
    } catch (const InsufficientDataError&) {
        return kNaN;
    }
}

ReturnStats return_stats(const ReturnSeries& r) {
    return {annualized_return(r), annualized_vol(r), or_nan([&] { return sharpe_ratio(r); })};
}

ActiveStats active_stats(const ReturnSeries& s, const ReturnSeries& b) {
    const auto d = differences(s, b);
    ActiveStats a;
    a.alpha_annual = mean_of(d) * kDaysPerYear;
    a.te_annual = population_std(d) * std::sqrt(kDaysPerYear);
    a.ir = or_nan([&] { return alpha_and_te(s, b).ir; });
    return a;
}

}  // namespace

PerformanceReport build_report(const BacktestResult& result, const AlignedPanel& panel,
                               const BacktestResult* static_result) {
    PerformanceReport rep;
    const auto strat = result.strategy_returns();
    const auto bench = result.benchmark_returns();
    const auto rs = return_stats(strat);
    rep.annual_return = rs.annual_return;
    rep.annual_vol = rs.annual_vol;
    rep.sharpe = rs.sharpe;
    rep.benchmark = return_stats(bench);

    const auto act = active_stats(strat, bench);
    rep.alpha_annual = act.alpha_annual;
    rep.te_annual = act.te_annual;
    rep.ir = act.ir;
    rep.mrdd = mrdd(result.nav_series(), result.benchmark_nav_series());
    rep.turnover_annual = turnover_annual(result);
    rep.ter = ter(rep.turnover_annual, result.cost_spread);
    rep.alpha_pvalue = or_nan([&] { return alpha_significance(strat, bench); });
    const auto split = allocation_active_split(result, panel);
    rep.allocation_component = split.allocation;
    rep.active_component = split.active;
    rep.mean_weights = mean_weights(result);

    if (static_result) {
        const auto stat = static_result->strategy_returns();
        VsMeanReport vs;
        vs.static_stats = return_stats(stat);
        const auto a = active_stats(strat, stat);
        vs.alpha_annual = a.alpha_annual;
        vs.te_annual = a.te_annual;
        vs.ir = a.ir;
        vs.pvalue = or_nan([&] { return alpha_significance(strat, stat); });
        rep.vs_mean = vs;
    }
    return rep;
}

}  // namespace xsalpha
