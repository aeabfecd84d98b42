#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "xsalpha/timeseries.hpp"

namespace xsalpha {

/// Window mean and covariance of daily excess returns.
///
/// Entry 0 is the benchmark: delta[0] and the benchmark row/column of
/// omega are identically zero. Units are per day (delta) and per day
/// squared (omega).
struct ExcessStats {
    Date as_of{};
    std::vector<std::string> names;
    Eigen::VectorXd delta;
    Eigen::MatrixXd omega;
    int window_days = 0;
    std::size_t sample_count = 0;

    std::size_t size() const noexcept { return static_cast<std::size_t>(delta.size()); }
};

/// Eigenvalues of omega below this are rejected rather than repaired.
inline constexpr double kPsdTolerance = 1e-10;

/// Daily excess returns of every index against the benchmark, computed once
/// so that many windows can be evaluated cheaply.
class ExcessReturnPanel {
public:
    explicit ExcessReturnPanel(const AlignedPanel& panel);

    /// Return dates (panel dates minus the first).
    const std::vector<Date>& dates() const noexcept { return dates_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    /// alpha(k, i-1) is the excess return of index i on dates()[k].
    const Eigen::MatrixXd& alpha() const noexcept { return alpha_; }
    const std::vector<Date>& panel_dates() const noexcept { return panel_dates_; }

private:
    std::vector<Date> panel_dates_;
    std::vector<Date> dates_;
    std::vector<std::string> names_;
    Eigen::MatrixXd alpha_;
};

/// Mean and population covariance of excess returns dated in the
/// half-open calendar window (as_of - window_days, as_of].
ExcessStats compute_excess_stats(const AlignedPanel& panel, Date as_of, int window_days);
ExcessStats compute_excess_stats(const ExcessReturnPanel& excess, Date as_of, int window_days);

/// Statistics straight from an observation matrix (rows = days, columns =
/// indices). Benchmark entries are prepended as zeros.
ExcessStats excess_stats_from_samples(const Eigen::MatrixXd& samples, std::vector<std::string> names, Date as_of,
                                      int window_days);

/// Clips eigenvalues in (-kPsdTolerance, 0) by a diagonal shift on the index
/// block; throws ValidationError for anything more negative.
void repair_psd(Eigen::MatrixXd& omega);

}  // namespace xsalpha
