#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xsalpha/analytics.hpp"
#include "xsalpha/backtest.hpp"
#include "xsalpha/datagen.hpp"

namespace xsalpha {

enum class BoundMode { long_only, long_short, explicit_bounds };

/// One run, read from a flat `key = value` file. See README for the keys.
struct RunConfig {
    std::string name = "run";
    std::optional<std::filesystem::path> panel_path;
    std::optional<SynthSpec> synth;
    std::optional<std::filesystem::path> synth_output;  ///< panel file written by `xsalpha synth`
    std::string benchmark_column;
    std::vector<std::string> index_columns;  ///< empty = every non-benchmark column

    int lookback_days = 91;
    int rebalance_every_days = 28;
    double sigma_annual = 0.04;
    BoundMode bound_mode = BoundMode::long_only;
    std::vector<double> lower_bounds;  ///< explicit mode, benchmark first
    std::vector<double> upper_bounds;
    double cost_spread = 0.0005;
    std::optional<Date> start;
    std::optional<Date> end;
    bool compare_static_mean = true;

    std::filesystem::path out_dir = ".";
    std::optional<std::filesystem::path> report_path;
    std::optional<std::filesystem::path> series_path;

    std::filesystem::path report_file() const;
    std::filesystem::path report_json_file() const;
    std::filesystem::path series_file() const;
    std::filesystem::path trades_file() const;
    std::filesystem::path static_series_file() const;
    std::filesystem::path synth_output_file() const;
};

/// Parses a config. Unknown keys, duplicates and bad values raise ConfigError
/// (with the line number in the message). Relative paths resolve against
/// `base_dir`.
RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir = ".");
RunConfig load_run_config(const std::filesystem::path& path);

/// The panel a config describes, restricted to its benchmark and index columns.
AlignedPanel resolve_panel(const RunConfig& config);
/// Strategy parameters for a resolved panel.
StrategyConfig make_strategy(const RunConfig& config, const AlignedPanel& panel);

struct RunOutput {
    BacktestResult result;
    std::optional<BacktestResult> static_result;
    PerformanceReport report;
};

/// Backtest (plus static mean-weight comparison) without writing anything.
RunOutput execute(const RunConfig& config, unsigned threads = 1);
/// execute() and write report, report JSON, series, trades and static series.
RunOutput run(const RunConfig& config, unsigned threads = 1);
/// Generates the config's synthetic panel and writes it in panel format.
std::filesystem::path run_synth(const RunConfig& config);

void write_report_text(std::ostream& out, const RunConfig& config, const RunOutput& output);
void write_report_json(std::ostream& out, const RunConfig& config, const RunOutput& output);
/// `date,nav_gross,nav_net,benchmark_nav,w_<name>...`
void write_series(std::ostream& out, const BacktestResult& result);
/// `date,turnover,w_<name>...` with the target weights of each rebalance.
void write_trades(std::ostream& out, const BacktestResult& result);

/// Rebuilds a result from emitted series and trade files.
BacktestResult read_backtest(std::istream& series, std::istream& trades, double cost_spread);

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace xsalpha
