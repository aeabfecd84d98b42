#include "xsalpha/signal.hpp"

#include <algorithm>

#include "xsalpha/errors.hpp"

namespace xsalpha {

ExcessReturnPanel::ExcessReturnPanel(const AlignedPanel& panel)
    : panel_dates_(panel.dates()), names_(panel.names()) {
    const auto n = panel.index_count();
    if (panel_dates_.size() < 2) {
        throw InsufficientDataError("excess returns need at least 2 panel dates", panel_dates_.size());
    }
    dates_.assign(panel_dates_.begin() + 1, panel_dates_.end());
    alpha_.resize(static_cast<Eigen::Index>(dates_.size()), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto a = daily_excess_returns(excess_ratio(panel.indices()[i], panel.benchmark()));
        for (std::size_t k = 0; k < a.size(); ++k) {
            alpha_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = a.values()[k];
        }
    }
}

ExcessStats excess_stats_from_samples(const Eigen::MatrixXd& samples, std::vector<std::string> names, Date as_of,
                                      int window_days) {
    const auto count = samples.rows();
    const auto n = samples.cols();
    if (count < 2) throw InsufficientDataError("excess statistics need at least 2 observations", count);

    // Two-pass: mean first, then centred cross products.
    const Eigen::RowVectorXd mean = samples.colwise().mean();
    const Eigen::MatrixXd centred = samples.rowwise() - mean;
    Eigen::MatrixXd cov = (centred.transpose() * centred) / static_cast<double>(count);
    cov = 0.5 * (cov + cov.transpose()).eval();

    ExcessStats s;
    s.as_of = as_of;
    s.names = std::move(names);
    s.window_days = window_days;
    s.sample_count = static_cast<std::size_t>(count);
    s.delta = Eigen::VectorXd::Zero(n + 1);
    s.delta.tail(n) = mean.transpose();
    s.omega = Eigen::MatrixXd::Zero(n + 1, n + 1);
    s.omega.bottomRightCorner(n, n) = cov;
    repair_psd(s.omega);
    return s;
}

ExcessStats compute_excess_stats(const ExcessReturnPanel& excess, Date as_of, int window_days) {
    if (window_days <= 0) throw ValidationError("window_days must be positive");
    const auto& pd = excess.panel_dates();
    if (!std::binary_search(pd.begin(), pd.end(), as_of)) {
        throw DateError("as_of " + format_date(as_of) + " is not a panel date");
    }
    const auto& ds = excess.dates();
    const Date window_start = as_of - std::chrono::days{window_days};
    const auto first = std::upper_bound(ds.begin(), ds.end(), window_start) - ds.begin();
    const auto last = std::upper_bound(ds.begin(), ds.end(), as_of) - ds.begin();
    const auto count = std::max<std::ptrdiff_t>(0, last - first);
    if (count < 2) {
        throw InsufficientDataError("window ending " + format_date(as_of) + " of " + std::to_string(window_days) +
                                        " days has fewer than 2 excess-return observations",
                                    static_cast<std::size_t>(count));
    }
    return excess_stats_from_samples(excess.alpha().middleRows(first, count), excess.names(), as_of, window_days);
}

ExcessStats compute_excess_stats(const AlignedPanel& panel, Date as_of, int window_days) {
    return compute_excess_stats(ExcessReturnPanel(panel), as_of, window_days);
}

void repair_psd(Eigen::MatrixXd& omega) {
    const auto n = omega.rows() - 1;
    if (n <= 0) return;
    auto block = omega.bottomRightCorner(n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block, Eigen::EigenvaluesOnly);
    const double smallest = eig.eigenvalues().minCoeff();
    if (smallest >= 0.0) return;
    if (smallest <= -kPsdTolerance) {
        throw ValidationError("covariance matrix is not positive semidefinite (eigenvalue " + format_real(smallest) +
                              ")");
    }
    block.diagonal().array() -= smallest;
}

}  // namespace xsalpha
