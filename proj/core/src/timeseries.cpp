#include "xsalpha/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>

#include "xsalpha/errors.hpp"

namespace xsalpha {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(',', pos);
        cells.push_back(trim(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return cells;
}

int parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return -1;
    return v;
}

void check_increasing(const std::vector<Date>& dates, const std::string& what) {
    for (std::size_t k = 1; k < dates.size(); ++k) {
        if (dates[k] <= dates[k - 1]) {
            throw ValidationError(what + ": dates not strictly increasing at " + format_date(dates[k]));
        }
    }
}

}  // namespace

Date parse_date(std::string_view text) {
    text = trim(text);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ParseError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD", 0);
    }
    const int y = parse_int(text.substr(0, 4));
    const int m = parse_int(text.substr(5, 2));
    const int d = parse_int(text.substr(8, 2));
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (y < 0 || m < 0 || d < 0 || !ymd.ok()) {
        throw ParseError("invalid date '" + std::string(text) + "'", 0);
    }
    return std::chrono::sys_days{ymd};
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_real(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

PriceSeries::PriceSeries(std::string name, std::vector<Date> dates, std::vector<double> levels)
    : name_(std::move(name)), dates_(std::move(dates)), levels_(std::move(levels)) {
    if (dates_.size() != levels_.size()) throw ValidationError(name_ + ": dates and levels differ in length");
    check_increasing(dates_, name_);
    for (std::size_t k = 0; k < levels_.size(); ++k) {
        if (!(levels_[k] > 0.0) || !std::isfinite(levels_[k])) {
            throw ValidationError(name_ + ": non-positive level " + format_real(levels_[k]) + " on " +
                                  format_date(dates_[k]));
        }
    }
}

ReturnSeries::ReturnSeries(std::string name, std::vector<Date> dates, std::vector<double> returns)
    : name_(std::move(name)), dates_(std::move(dates)), values_(std::move(returns)) {
    if (dates_.size() != values_.size()) throw ValidationError(name_ + ": dates and returns differ in length");
    check_increasing(dates_, name_);
}

AlignedPanel::AlignedPanel(PriceSeries benchmark, std::vector<PriceSeries> indices)
    : benchmark_(std::move(benchmark)), indices_(std::move(indices)) {
    if (indices_.empty()) throw ValidationError("panel needs at least one index besides the benchmark");
    std::set<std::string> seen{benchmark_.name()};
    for (const auto& s : indices_) {
        if (!seen.insert(s.name()).second) throw ValidationError("duplicate series name '" + s.name() + "'");
        if (s.dates() != benchmark_.dates()) {
            throw AlignmentError("series '" + s.name() + "' is not on the panel's date grid");
        }
    }
}

std::vector<std::string> AlignedPanel::names() const {
    std::vector<std::string> out{benchmark_.name()};
    for (const auto& s : indices_) out.push_back(s.name());
    return out;
}

std::size_t AlignedPanel::find_date(Date d) const noexcept {
    const auto& ds = dates();
    const auto it = std::lower_bound(ds.begin(), ds.end(), d);
    if (it == ds.end() || *it != d) return npos;
    return static_cast<std::size_t>(it - ds.begin());
}

AlignedPanel AlignedPanel::slice(Date from, Date to) const {
    const auto& ds = dates();
    const auto lo = static_cast<std::size_t>(std::lower_bound(ds.begin(), ds.end(), from) - ds.begin());
    const auto hi = static_cast<std::size_t>(std::upper_bound(ds.begin(), ds.end(), to) - ds.begin());
    if (lo >= hi) throw AlignmentError("panel slice " + format_date(from) + ".." + format_date(to) + " is empty");
    auto cut = [&](const PriceSeries& s) {
        return PriceSeries(s.name(), std::vector<Date>(ds.begin() + lo, ds.begin() + hi),
                           std::vector<double>(s.levels().begin() + lo, s.levels().begin() + hi));
    };
    std::vector<PriceSeries> idx;
    for (const auto& s : indices_) idx.push_back(cut(s));
    return AlignedPanel(cut(benchmark_), std::move(idx));
}

AlignedPanel AlignedPanel::select(std::span<const std::string> index_names) const {
    std::vector<PriceSeries> idx;
    for (const auto& want : index_names) {
        const auto it = std::find_if(indices_.begin(), indices_.end(), [&](const auto& s) { return s.name() == want; });
        if (it == indices_.end()) throw ConfigError("index column '" + want + "' not in panel");
        idx.push_back(*it);
    }
    return AlignedPanel(benchmark_, std::move(idx));
}

AlignedPanel load_panel(std::istream& in, std::string_view benchmark_column) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (trim(view).empty()) continue;
        for (auto cell : split_commas(view)) header.emplace_back(cell);
        have_header = true;
        break;
    }
    if (!have_header) throw ParseError("empty panel stream", line_no);
    if (header.size() < 2 || header[0] != "date") {
        throw ParseError("header must be 'date,<name>,...'", line_no);
    }
    const std::size_t columns = header.size() - 1;
    {
        std::set<std::string> unique;
        for (std::size_t c = 1; c <= columns; ++c) {
            if (header[c].empty()) throw ParseError("empty column name", line_no);
            if (!unique.insert(header[c]).second) throw ParseError("duplicate column '" + header[c] + "'", line_no);
        }
    }
    const auto bench_it = std::find(header.begin() + 1, header.end(), benchmark_column);
    if (bench_it == header.end()) {
        throw ConfigError("benchmark column '" + std::string(benchmark_column) + "' not in panel header");
    }
    const auto bench_col = static_cast<std::size_t>(bench_it - header.begin()) - 1;
    if (columns < 2) throw ValidationError("panel needs at least one index column besides the benchmark");

    std::vector<Date> dates;
    std::vector<std::vector<double>> levels(columns);
    std::optional<Date> previous;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_commas(line);
        if (cells.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " cells, got " +
                                 std::to_string(cells.size()),
                             line_no);
        }
        Date d;
        try {
            d = parse_date(cells[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        if (previous && d <= *previous) throw ParseError("dates must be strictly increasing", line_no);
        previous = d;

        std::vector<double> row(columns);
        bool complete = true;
        for (std::size_t c = 0; c < columns; ++c) {
            const auto cell = cells[c + 1];
            if (cell.empty()) {
                complete = false;
                continue;
            }
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw ParseError("invalid number '" + std::string(cell) + "' in column '" + header[c + 1] + "'",
                                 line_no);
            }
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw ValidationError(header[c + 1] + ": non-positive level " + std::string(cell) + " on " +
                                      format_date(d));
            }
            row[c] = v;
        }
        if (!complete) continue;
        dates.push_back(d);
        for (std::size_t c = 0; c < columns; ++c) levels[c].push_back(row[c]);
    }
    if (dates.empty()) throw AlignmentError("no date on which every column has a value");

    PriceSeries bench(header[bench_col + 1], dates, std::move(levels[bench_col]));
    std::vector<PriceSeries> idx;
    for (std::size_t c = 0; c < columns; ++c) {
        if (c == bench_col) continue;
        idx.emplace_back(header[c + 1], dates, std::move(levels[c]));
    }
    return AlignedPanel(std::move(bench), std::move(idx));
}

void write_panel(std::ostream& out, const AlignedPanel& panel) {
    out << "date";
    for (const auto& n : panel.names()) out << ',' << n;
    out << '\n';
    const auto& ds = panel.dates();
    for (std::size_t k = 0; k < ds.size(); ++k) {
        out << format_date(ds[k]);
        for (std::size_t i = 0; i <= panel.index_count(); ++i) out << ',' << format_real(panel.series(i).levels()[k]);
        out << '\n';
    }
}

PriceSeries excess_ratio(const PriceSeries& series, const PriceSeries& benchmark) {
    if (series.dates() != benchmark.dates()) {
        throw AlignmentError("'" + series.name() + "' and '" + benchmark.name() + "' have different dates");
    }
    std::vector<double> ratio(series.size());
    for (std::size_t k = 0; k < ratio.size(); ++k) ratio[k] = series.levels()[k] / benchmark.levels()[k];
    return PriceSeries(series.name(), series.dates(), std::move(ratio));
}

ReturnSeries daily_returns(const PriceSeries& levels) {
    if (levels.size() < 2) throw InsufficientDataError(levels.name() + ": need at least 2 observations", levels.size());
    const auto& x = levels.levels();
    std::vector<double> r(x.size() - 1);
    for (std::size_t k = 1; k < x.size(); ++k) r[k - 1] = x[k] / x[k - 1] - 1.0;
    return ReturnSeries(levels.name(), std::vector<Date>(levels.dates().begin() + 1, levels.dates().end()), std::move(r));
}

ReturnSeries daily_excess_returns(const PriceSeries& ratio) { return daily_returns(ratio); }

}  // namespace xsalpha
