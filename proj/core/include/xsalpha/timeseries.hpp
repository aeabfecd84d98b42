#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xsalpha {

/// Calendar date with day resolution. Differences are calendar days.
using Date = std::chrono::sys_days;

/// Parses `YYYY-MM-DD`. Throws ParseError on anything else.
Date parse_date(std::string_view text);
std::string format_date(Date d);

/// Formats a double so that parsing it back yields the same value.
std::string format_real(double v);

/// Named level series (total-return index points). Dates strictly
/// increasing, every level strictly positive.
class PriceSeries {
public:
    PriceSeries() = default;
    PriceSeries(std::string name, std::vector<Date> dates, std::vector<double> levels);

    const std::string& name() const noexcept { return name_; }
    const std::vector<Date>& dates() const noexcept { return dates_; }
    const std::vector<double>& levels() const noexcept { return levels_; }
    std::size_t size() const noexcept { return levels_.size(); }

private:
    std::string name_;
    std::vector<Date> dates_;
    std::vector<double> levels_;
};

/// Daily arithmetic returns; observation k is dated at the later of the
/// two levels it was computed from.
class ReturnSeries {
public:
    ReturnSeries() = default;
    ReturnSeries(std::string name, std::vector<Date> dates, std::vector<double> returns);

    const std::string& name() const noexcept { return name_; }
    const std::vector<Date>& dates() const noexcept { return dates_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::string name_;
    std::vector<Date> dates_;
    std::vector<double> values_;
};

/// Benchmark plus n >= 1 related indices observed on one common date grid.
class AlignedPanel {
public:
    AlignedPanel(PriceSeries benchmark, std::vector<PriceSeries> indices);

    const std::vector<Date>& dates() const noexcept { return benchmark_.dates(); }
    const PriceSeries& benchmark() const noexcept { return benchmark_; }
    const std::vector<PriceSeries>& indices() const noexcept { return indices_; }
    std::size_t index_count() const noexcept { return indices_.size(); }

    /// Series by position, benchmark at 0 and index i at i.
    const PriceSeries& series(std::size_t i) const { return i == 0 ? benchmark_ : indices_.at(i - 1); }
    /// Labels, benchmark first.
    std::vector<std::string> names() const;

    /// Position of `d` in dates(), or npos.
    std::size_t find_date(Date d) const noexcept;

    /// Same universe restricted to dates in [from, to].
    AlignedPanel slice(Date from, Date to) const;
    /// Same universe restricted to the given index columns, in that order.
    AlignedPanel select(std::span<const std::string> index_names) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    PriceSeries benchmark_;
    std::vector<PriceSeries> indices_;
};

/// Reads the comma-separated panel format (header `date,<name>...`, blank
/// cell = missing) and keeps only dates on which every column has a value.
AlignedPanel load_panel(std::istream& in, std::string_view benchmark_column);

/// Writes the panel in the same format, benchmark column first.
void write_panel(std::ostream& out, const AlignedPanel& panel);

/// Pointwise ratio series / benchmark.
PriceSeries excess_ratio(const PriceSeries& series, const PriceSeries& benchmark);

/// R(t_k) / R(t_{k-1}) - 1 on consecutive observations.
ReturnSeries daily_excess_returns(const PriceSeries& ratio);

/// Plain daily arithmetic returns of a level series.
ReturnSeries daily_returns(const PriceSeries& levels);

}  // namespace xsalpha
