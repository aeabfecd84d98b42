#include "xsalpha/run.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "xsalpha/errors.hpp"

namespace xsalpha {

namespace fs = std::filesystem;

fs::path RunConfig::report_file() const { return report_path ? out_dir / *report_path : out_dir / "report.txt"; }
fs::path RunConfig::report_json_file() const { return out_dir / "report.json"; }
fs::path RunConfig::series_file() const { return series_path ? out_dir / *series_path : out_dir / "series.csv"; }
fs::path RunConfig::trades_file() const { return out_dir / "trades.csv"; }
fs::path RunConfig::static_series_file() const { return out_dir / "static_series.csv"; }
fs::path RunConfig::synth_output_file() const { return synth_output ? *synth_output : out_dir / "panel.csv"; }

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_real(const std::string& key, const std::string& v) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError(key + ": '" + v + "' is not a number");
    }
    return out;
}

long long to_integer(const std::string& key, const std::string& v) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key + ": '" + v + "' is not an integer");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": '" + v + "' is not a boolean");
}

std::vector<double> to_reals(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& item : split_list(v)) out.push_back(to_real(key, item));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

Eigen::VectorXd broadcast(const std::string& key, const std::vector<double>& values, int n) {
    if (values.size() == 1) return Eigen::VectorXd::Constant(n, values[0]);
    if (values.size() != static_cast<std::size_t>(n)) {
        throw ConfigError(key + ": expected 1 or " + std::to_string(n) + " values");
    }
    return Eigen::Map<const Eigen::VectorXd>(values.data(), n);
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "name", "panel_path", "benchmark_column", "index_columns", "lookback_days", "rebalance_every_days",
        "sigma_annual", "bounds", "lower_bounds", "upper_bounds", "cost_spread", "start", "end",
        "compare_static_mean", "out_dir", "report_path", "series_path", "synth.seed", "synth.days",
        "synth.n_indices", "synth.benchmark_drift", "synth.benchmark_vol", "synth.excess_drift", "synth.excess_vol",
        "synth.excess_ar1", "synth.correlation", "synth.start_date", "synth.weekdays_only", "synth.output"};
    return keys;
}

}  // namespace

RunConfig parse_run_config(std::istream& in, const fs::path& base_dir) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (!known_keys().contains(key)) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (!kv.emplace(key, value).second) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }

    auto resolve = [&](const std::string& p) {
        const fs::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    };
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    auto date_of = [&](const std::string& key, const std::string& v) {
        try {
            return parse_date(v);
        } catch (const ParseError& e) {
            throw ConfigError(key + ": " + e.what());
        }
    };

    RunConfig c;
    if (auto v = get("name")) c.name = *v;
    if (auto v = get("panel_path")) c.panel_path = resolve(*v);
    if (auto v = get("benchmark_column")) c.benchmark_column = *v;
    if (auto v = get("index_columns")) {
        c.index_columns = split_list(*v);
        if (c.index_columns.empty()) throw ConfigError("index_columns: empty list");
    }
    if (auto v = get("lookback_days")) c.lookback_days = static_cast<int>(to_integer("lookback_days", *v));
    if (auto v = get("rebalance_every_days")) {
        c.rebalance_every_days = static_cast<int>(to_integer("rebalance_every_days", *v));
    }
    if (auto v = get("sigma_annual")) c.sigma_annual = to_real("sigma_annual", *v);
    if (auto v = get("bounds")) {
        if (*v == "long-only") {
            c.bound_mode = BoundMode::long_only;
        } else if (*v == "long-short") {
            c.bound_mode = BoundMode::long_short;
        } else if (*v == "explicit") {
            c.bound_mode = BoundMode::explicit_bounds;
        } else {
            throw ConfigError("bounds: expected long-only, long-short or explicit, got '" + *v + "'");
        }
    }
    if (auto v = get("lower_bounds")) c.lower_bounds = to_reals("lower_bounds", *v);
    if (auto v = get("upper_bounds")) c.upper_bounds = to_reals("upper_bounds", *v);
    if ((c.bound_mode == BoundMode::explicit_bounds) != (!c.lower_bounds.empty() || !c.upper_bounds.empty())) {
        throw ConfigError("lower_bounds/upper_bounds go together with bounds = explicit");
    }
    if (c.bound_mode == BoundMode::explicit_bounds && c.lower_bounds.size() != c.upper_bounds.size()) {
        throw ConfigError("lower_bounds and upper_bounds differ in length");
    }
    if (auto v = get("cost_spread")) c.cost_spread = to_real("cost_spread", *v);
    if (auto v = get("start")) c.start = date_of("start", *v);
    if (auto v = get("end")) c.end = date_of("end", *v);
    if (auto v = get("compare_static_mean")) c.compare_static_mean = to_bool("compare_static_mean", *v);
    if (auto v = get("out_dir")) c.out_dir = resolve(*v);
    if (auto v = get("report_path")) c.report_path = fs::path(*v);
    if (auto v = get("series_path")) c.series_path = fs::path(*v);
    if (auto v = get("synth.output")) c.synth_output = resolve(*v);

    const bool any_synth = std::any_of(kv.begin(), kv.end(), [](const auto& e) {
        return e.first.starts_with("synth.") && e.first != "synth.output";
    });
    if (any_synth) {
        SynthSpec s;
        s.n_indices = 1;
        if (auto v = get("synth.n_indices")) s.n_indices = static_cast<int>(to_integer("synth.n_indices", *v));
        if (s.n_indices < 1) throw ConfigError("synth.n_indices must be positive");
        if (auto v = get("synth.seed")) s.seed = static_cast<std::uint64_t>(to_integer("synth.seed", *v));
        if (auto v = get("synth.days")) s.days = static_cast<int>(to_integer("synth.days", *v));
        if (auto v = get("synth.benchmark_drift")) s.benchmark_drift = to_real("synth.benchmark_drift", *v);
        if (auto v = get("synth.benchmark_vol")) s.benchmark_vol = to_real("synth.benchmark_vol", *v);
        auto vec = [&](const char* key, double fallback) {
            const auto v = get(key);
            return v ? broadcast(key, to_reals(key, *v), s.n_indices) : Eigen::VectorXd::Constant(s.n_indices, fallback);
        };
        s.excess_drift = vec("synth.excess_drift", 0.0);
        s.excess_vol = vec("synth.excess_vol", 0.0);
        s.excess_ar1 = vec("synth.excess_ar1", 0.0);
        s.correlation = Eigen::MatrixXd::Identity(s.n_indices, s.n_indices);
        if (auto v = get("synth.correlation")) {
            const auto values = to_reals("synth.correlation", *v);
            const auto n = static_cast<std::size_t>(s.n_indices);
            if (values.size() == 1) {
                s.correlation.setConstant(values[0]);
                s.correlation.diagonal().setOnes();
            } else if (values.size() == n * n) {
                s.correlation = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                    values.data(), s.n_indices, s.n_indices);
            } else {
                throw ConfigError("synth.correlation: expected 1 or n*n values");
            }
        }
        if (auto v = get("synth.start_date")) s.start_date = date_of("synth.start_date", *v);
        if (auto v = get("synth.weekdays_only")) s.weekdays_only = to_bool("synth.weekdays_only", *v);
        try {
            s.validate();
        } catch (const ValidationError& e) {
            throw ConfigError(std::string("synth: ") + e.what());
        }
        c.synth = s;
    }
    if (c.panel_path && c.synth) throw ConfigError("panel_path and synth.* are mutually exclusive");
    if (!c.panel_path && !c.synth) throw ConfigError("one of panel_path or synth.* is required");
    if (c.synth && c.benchmark_column.empty()) c.benchmark_column = "benchmark";
    if (c.benchmark_column.empty()) throw ConfigError("benchmark_column is required");
    for (const auto& name : c.index_columns) {
        if (name == c.benchmark_column) throw ConfigError("index_columns must not contain the benchmark column");
    }
    if (std::set<std::string>(c.index_columns.begin(), c.index_columns.end()).size() != c.index_columns.size()) {
        throw ConfigError("index_columns has duplicates");
    }
    if (c.lookback_days < 2) throw ConfigError("lookback_days must be at least 2");
    if (c.rebalance_every_days < 1) throw ConfigError("rebalance_every_days must be at least 1");
    if (!(c.sigma_annual > 0.0)) throw ConfigError("sigma_annual must be positive");
    if (!(c.cost_spread >= 0.0)) throw ConfigError("cost_spread must be nonnegative");
    if (c.start && c.end && !(*c.start < *c.end)) throw ConfigError("start must be before end");
    return c;
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    return parse_run_config(in, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

AlignedPanel resolve_panel(const RunConfig& config) {
    AlignedPanel panel = [&] {
        if (config.synth) return generate(*config.synth);
        std::ifstream in(*config.panel_path);
        if (!in) throw ConfigError("cannot read panel " + config.panel_path->string());
        return load_panel(in, config.benchmark_column);
    }();
    if (panel.benchmark().name() != config.benchmark_column) {
        throw ConfigError("benchmark column '" + config.benchmark_column + "' not in panel");
    }
    if (!config.index_columns.empty()) panel = panel.select(config.index_columns);
    return panel;
}

StrategyConfig make_strategy(const RunConfig& config, const AlignedPanel& panel) {
    StrategyConfig s;
    s.lookback_days = config.lookback_days;
    s.rebalance_every_days = config.rebalance_every_days;
    s.sigma_annual = config.sigma_annual;
    s.cost_spread = config.cost_spread;
    const auto n = panel.index_count();
    switch (config.bound_mode) {
        case BoundMode::long_only: s.bounds = BoundSet::long_only(n); break;
        case BoundMode::long_short: s.bounds = BoundSet::long_short(n); break;
        case BoundMode::explicit_bounds:
            if (config.lower_bounds.size() != n + 1) {
                throw ConfigError("explicit bounds need " + std::to_string(n + 1) + " entries (benchmark first)");
            }
            s.bounds.lower = Eigen::Map<const Eigen::VectorXd>(config.lower_bounds.data(), static_cast<Eigen::Index>(n + 1));
            s.bounds.upper = Eigen::Map<const Eigen::VectorXd>(config.upper_bounds.data(), static_cast<Eigen::Index>(n + 1));
            try {
                s.bounds.validate();
            } catch (const ValidationError& e) {
                throw ConfigError(e.what());
            }
            break;
    }
    s.start = config.start.value_or(panel.dates().front());
    s.end = config.end.value_or(panel.dates().back());
    return s;
}

RunOutput execute(const RunConfig& config, unsigned threads) {
    const AlignedPanel panel = resolve_panel(config);
    const StrategyConfig strategy = make_strategy(config, panel);
    RunOutput out{run_backtest(panel, strategy, threads), std::nullopt, {}};
    if (config.compare_static_mean) out.static_result = run_static_backtest(panel, mean_weights(out.result), strategy);
    out.report = build_report(out.result, panel, out.static_result ? &*out.static_result : nullptr);
    return out;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw Error("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

RunOutput run(const RunConfig& config, unsigned threads) {
    RunOutput out = execute(config, threads);
    auto render = [](auto&& fn) {
        std::ostringstream ss;
        fn(ss);
        return ss.str();
    };
    write_file_atomic(config.series_file(), render([&](std::ostream& s) { write_series(s, out.result); }));
    write_file_atomic(config.trades_file(), render([&](std::ostream& s) { write_trades(s, out.result); }));
    if (out.static_result) {
        write_file_atomic(config.static_series_file(),
                          render([&](std::ostream& s) { write_series(s, *out.static_result); }));
    }
    write_file_atomic(config.report_json_file(), render([&](std::ostream& s) { write_report_json(s, config, out); }));
    write_file_atomic(config.report_file(), render([&](std::ostream& s) { write_report_text(s, config, out); }));
    return out;
}

fs::path run_synth(const RunConfig& config) {
    if (!config.synth) throw ConfigError("synth needs synth.* keys");
    std::ostringstream ss;
    write_panel(ss, generate(*config.synth));
    const fs::path path = config.synth_output_file();
    write_file_atomic(path, ss.str());
    return path;
}

namespace {

std::string pct(double v) {
    if (std::isnan(v)) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", v * 100.0);
    return buf;
}

std::string num(double v, int decimals = 2) {
    if (std::isnan(v)) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string pvalue(double v) {
    if (std::isnan(v)) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void row(std::ostream& out, const std::string& label, const std::vector<std::string>& cells) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-16s", label.c_str());
    out << buf;
    for (const auto& c : cells) {
        std::snprintf(buf, sizeof buf, "%12s", c.c_str());
        out << buf;
    }
    out << '\n';
}

nlohmann::json real(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

}  // namespace

void write_report_text(std::ostream& out, const RunConfig& config, const RunOutput& o) {
    const auto& r = o.report;
    const auto& res = o.result;
    out << "Run: " << config.name << '\n';
    out << "Period: " << format_date(res.dates.front()) << " to " << format_date(res.dates.back()) << " ("
        << res.dates.size() << " dates, " << res.rebalance_dates.size() << " rebalances)\n";
    out << "Lookback " << config.lookback_days << " days, rebalance every " << config.rebalance_every_days
        << " days, target TE " << pct(config.sigma_annual) << ", cost spread " << num(config.cost_spread * 1e4, 1)
        << " bp\n\n";

    const bool vs = r.vs_mean.has_value();
    std::vector<std::string> head{"Benchmark", "Strategy"};
    if (vs) head.push_back("Mean");
    row(out, "", head);
    auto three = [&](std::string b, std::string s, std::string m) {
        std::vector<std::string> v{std::move(b), std::move(s)};
        if (vs) v.push_back(std::move(m));
        return v;
    };
    row(out, "Return", three(pct(r.benchmark.annual_return), pct(r.annual_return), vs ? pct(r.vs_mean->static_stats.annual_return) : ""));
    row(out, "VOL", three(pct(r.benchmark.annual_vol), pct(r.annual_vol), vs ? pct(r.vs_mean->static_stats.annual_vol) : ""));
    row(out, "SR", three(num(r.benchmark.sharpe), num(r.sharpe), vs ? num(r.vs_mean->static_stats.sharpe) : ""));
    out << '\n';
    row(out, "Alpha", {"---", pct(r.alpha_annual)});
    row(out, "TE", {"---", pct(r.te_annual)});
    row(out, "IR", {"---", num(r.ir)});
    row(out, "p-value", {"---", pvalue(r.alpha_pvalue)});
    row(out, "MRDD", {"---", pct(r.mrdd)});
    out << '\n';
    out << "Mean Weights\n";
    for (std::size_t i = 0; i < r.mean_weights.names.size(); ++i) {
        row(out, "  " + r.mean_weights.names[i], {pct(r.mean_weights.weights(static_cast<Eigen::Index>(i)))});
    }
    out << '\n';
    row(out, "Allocation", {pct(r.allocation_component)});
    row(out, "Active", {pct(r.active_component)});
    out << '\n';
    row(out, "TER", {pct(r.ter)});
    row(out, "Turnover", {pct(r.turnover_annual)});
    if (vs) {
        out << '\n';
        row(out, "Alpha vs. Mean", {pct(r.vs_mean->alpha_annual)});
        row(out, "TE vs. Mean", {pct(r.vs_mean->te_annual)});
        row(out, "IR vs. Mean", {num(r.vs_mean->ir)});
        row(out, "p-value vs. Mean", {pvalue(r.vs_mean->pvalue)});
    }
}

void write_report_json(std::ostream& out, const RunConfig& config, const RunOutput& o) {
    const auto& r = o.report;
    nlohmann::ordered_json j;
    j["name"] = config.name;
    j["start"] = format_date(o.result.dates.front());
    j["end"] = format_date(o.result.dates.back());
    j["lookback_days"] = config.lookback_days;
    j["rebalance_every_days"] = config.rebalance_every_days;
    j["sigma_annual"] = config.sigma_annual;
    j["cost_spread"] = config.cost_spread;
    j["annual_return"] = real(r.annual_return);
    j["annual_vol"] = real(r.annual_vol);
    j["sharpe"] = real(r.sharpe);
    j["benchmark"] = {{"annual_return", real(r.benchmark.annual_return)},
                      {"annual_vol", real(r.benchmark.annual_vol)},
                      {"sharpe", real(r.benchmark.sharpe)}};
    j["alpha_annual"] = real(r.alpha_annual);
    j["te_annual"] = real(r.te_annual);
    j["ir"] = real(r.ir);
    j["alpha_pvalue"] = real(r.alpha_pvalue);
    j["mrdd"] = real(r.mrdd);
    j["ter"] = real(r.ter);
    j["turnover_annual"] = real(r.turnover_annual);
    j["allocation_component"] = real(r.allocation_component);
    j["active_component"] = real(r.active_component);
    nlohmann::ordered_json mw;
    for (std::size_t i = 0; i < r.mean_weights.names.size(); ++i) {
        mw[r.mean_weights.names[i]] = r.mean_weights.weights(static_cast<Eigen::Index>(i));
    }
    j["mean_weights"] = mw;
    if (r.vs_mean) {
        j["vs_mean"] = {{"annual_return", real(r.vs_mean->static_stats.annual_return)},
                        {"annual_vol", real(r.vs_mean->static_stats.annual_vol)},
                        {"sharpe", real(r.vs_mean->static_stats.sharpe)},
                        {"alpha_annual", real(r.vs_mean->alpha_annual)},
                        {"te_annual", real(r.vs_mean->te_annual)},
                        {"ir", real(r.vs_mean->ir)},
                        {"pvalue", real(r.vs_mean->pvalue)}};
    } else {
        j["vs_mean"] = nullptr;
    }
    out << j.dump(2) << '\n';
}

void write_series(std::ostream& out, const BacktestResult& r) {
    out << "date,nav_gross,nav_net,benchmark_nav";
    for (const auto& n : r.names) out << ",w_" << n;
    out << '\n';
    for (std::size_t k = 0; k < r.dates.size(); ++k) {
        out << format_date(r.dates[k]) << ',' << format_real(r.nav[k]) << ',' << format_real(r.nav_net[k]) << ','
            << format_real(r.benchmark_nav[k]);
        for (Eigen::Index i = 0; i < r.weights_history.cols(); ++i) {
            out << ',' << format_real(r.weights_history(static_cast<Eigen::Index>(k), i));
        }
        out << '\n';
    }
}

void write_trades(std::ostream& out, const BacktestResult& r) {
    out << "date,turnover";
    for (const auto& n : r.names) out << ",w_" << n;
    out << '\n';
    for (std::size_t j = 0; j < r.rebalance_dates.size(); ++j) {
        out << format_date(r.rebalance_dates[j]) << ',' << format_real(r.per_rebalance_turnover[j]);
        for (Eigen::Index i = 0; i < r.targets.cols(); ++i) {
            out << ',' << format_real(r.targets(static_cast<Eigen::Index>(j), i));
        }
        out << '\n';
    }
}

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<Date> dates;
    std::vector<std::vector<double>> rows;
};

Table read_table(std::istream& in, std::string_view what) {
    Table t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
        if (t.header.empty()) {
            t.header = cells;
            if (t.header.empty() || t.header[0] != "date") throw ParseError(std::string(what) + ": bad header", line_no);
            continue;
        }
        if (cells.size() != t.header.size()) throw ParseError(std::string(what) + ": wrong cell count", line_no);
        try {
            t.dates.push_back(parse_date(cells[0]));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        std::vector<double> values;
        for (std::size_t c = 1; c < cells.size(); ++c) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
            if (ec != std::errc{} || ptr != cells[c].data() + cells[c].size()) {
                throw ParseError(std::string(what) + ": invalid number '" + cells[c] + "'", line_no);
            }
            values.push_back(v);
        }
        t.rows.push_back(std::move(values));
    }
    if (t.header.empty()) throw ParseError(std::string(what) + ": empty", line_no);
    return t;
}

}  // namespace

BacktestResult read_backtest(std::istream& series, std::istream& trades, double cost_spread) {
    const Table s = read_table(series, "series");
    const Table t = read_table(trades, "trades");
    if (s.header.size() < 6 || s.header[1] != "nav_gross" || s.header[2] != "nav_net" || s.header[3] != "benchmark_nav") {
        throw ParseError("series: header must be date,nav_gross,nav_net,benchmark_nav,w_<name>...", 1);
    }
    BacktestResult r;
    for (std::size_t c = 4; c < s.header.size(); ++c) {
        if (!s.header[c].starts_with("w_")) throw ParseError("series: weight columns must start with w_", 1);
        r.names.push_back(s.header[c].substr(2));
    }
    const auto width = static_cast<Eigen::Index>(r.names.size());
    if (t.header.size() != r.names.size() + 2 || t.header[1] != "turnover") {
        throw ParseError("trades: header must be date,turnover,w_<name>...", 1);
    }
    r.dates = s.dates;
    r.weights_history.resize(static_cast<Eigen::Index>(s.rows.size()), width);
    for (std::size_t k = 0; k < s.rows.size(); ++k) {
        r.nav.push_back(s.rows[k][0]);
        r.nav_net.push_back(s.rows[k][1]);
        r.benchmark_nav.push_back(s.rows[k][2]);
        for (Eigen::Index i = 0; i < width; ++i) r.weights_history(static_cast<Eigen::Index>(k), i) = s.rows[k][3 + static_cast<std::size_t>(i)];
    }
    r.rebalance_dates = t.dates;
    r.targets.resize(static_cast<Eigen::Index>(t.rows.size()), width);
    for (std::size_t j = 0; j < t.rows.size(); ++j) {
        r.per_rebalance_turnover.push_back(t.rows[j][0]);
        for (Eigen::Index i = 0; i < width; ++i) r.targets(static_cast<Eigen::Index>(j), i) = t.rows[j][1 + static_cast<std::size_t>(i)];
    }
    r.cost_spread = cost_spread;
    return r;
}

}  // namespace xsalpha
