#include "xsalpha/datagen.hpp"

#include <cmath>
#include <numbers>

#include "xsalpha/errors.hpp"

namespace xsalpha {

SynthSpec SynthSpec::uniform(std::uint64_t seed, int days, int n_indices, double excess_drift, double excess_vol,
                             double ar1, double rho) {
    SynthSpec s;
    s.seed = seed;
    s.days = days;
    s.n_indices = n_indices;
    s.benchmark_drift = 0.0003;
    s.benchmark_vol = 0.01;
    s.excess_drift = Eigen::VectorXd::Constant(n_indices, excess_drift);
    s.excess_vol = Eigen::VectorXd::Constant(n_indices, excess_vol);
    s.excess_ar1 = Eigen::VectorXd::Constant(n_indices, ar1);
    s.correlation = Eigen::MatrixXd::Constant(n_indices, n_indices, rho);
    s.correlation.diagonal().setOnes();
    return s;
}

void SynthSpec::validate() const {
    if (days < 2) throw ValidationError("synthetic panel needs at least 2 days");
    if (n_indices < 1) throw ValidationError("synthetic panel needs at least 1 index");
    const auto n = static_cast<Eigen::Index>(n_indices);
    if (excess_drift.size() != n || excess_vol.size() != n || excess_ar1.size() != n) {
        throw ValidationError("excess drift/vol/ar1 must have one entry per index");
    }
    if (!(benchmark_vol >= 0.0) || (excess_vol.array() < 0.0).any()) throw ValidationError("vols must be nonnegative");
    if ((excess_ar1.array().abs() >= 1.0).any()) throw ValidationError("ar1 coefficients must lie in (-1, 1)");
    if (correlation.size() != 0) {
        if (correlation.rows() != n || correlation.cols() != n) throw ValidationError("correlation must be n x n");
        if ((correlation - correlation.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
            throw ValidationError("correlation must be symmetric");
        }
        if ((correlation.diagonal().array() != 1.0).any()) throw ValidationError("correlation diagonal must be 1");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(correlation, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -1e-12) throw ValidationError("correlation must be positive semidefinite");
    }
}

double PortableNormal::uniform() {
    // (0, 1): 53 random bits, offset by half an ulp so log() never sees 0.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double PortableNormal::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

namespace {

// Lower-triangular factor of a PSD matrix; zero pivots give zero columns.
Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& a) {
    const auto n = a.rows();
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double diag = a(j, j) - l.row(j).head(j).squaredNorm();
        if (diag <= 1e-14) continue;
        l(j, j) = std::sqrt(diag);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
        }
    }
    return l;
}

std::vector<Date> synth_dates(const SynthSpec& spec) {
    std::vector<Date> dates;
    dates.reserve(static_cast<std::size_t>(spec.days));
    Date d = spec.start_date;
    while (dates.size() < static_cast<std::size_t>(spec.days)) {
        const std::chrono::weekday wd{d};
        if (!spec.weekdays_only || (wd != std::chrono::Saturday && wd != std::chrono::Sunday)) dates.push_back(d);
        d += std::chrono::days{1};
    }
    return dates;
}

struct Draws {
    std::vector<double> benchmark_returns;
    Eigen::MatrixXd excess;
};

Draws draw(const SynthSpec& spec) {
    spec.validate();
    const auto n = static_cast<Eigen::Index>(spec.n_indices);
    const auto steps = static_cast<Eigen::Index>(spec.days - 1);
    const Eigen::MatrixXd chol =
        spec.correlation.size() == 0 ? Eigen::MatrixXd::Identity(n, n) : psd_cholesky(spec.correlation);

    PortableNormal normal(spec.seed);
    Draws out;
    out.benchmark_returns.resize(static_cast<std::size_t>(steps));
    out.excess.resize(steps, n);
    Eigen::VectorXd previous = spec.excess_drift;
    Eigen::VectorXd z(n);
    const double log_drift = spec.benchmark_drift - 0.5 * spec.benchmark_vol * spec.benchmark_vol;
    for (Eigen::Index t = 0; t < steps; ++t) {
        const double zb = normal();
        out.benchmark_returns[static_cast<std::size_t>(t)] = std::exp(log_drift + spec.benchmark_vol * zb) - 1.0;
        for (Eigen::Index i = 0; i < n; ++i) z(i) = normal();
        const Eigen::VectorXd shock = spec.excess_vol.cwiseProduct(chol * z);
        const Eigen::VectorXd a =
            spec.excess_drift + spec.excess_ar1.cwiseProduct(previous - spec.excess_drift) + shock;
        if ((a.array() <= -1.0).any()) throw ValidationError("excess return below -100% drawn; reduce excess_vol");
        out.excess.row(t) = a.transpose();
        previous = a;
    }
    return out;
}

}  // namespace

Eigen::MatrixXd generate_excess_paths(const SynthSpec& spec) { return draw(spec).excess; }

AlignedPanel generate(const SynthSpec& spec) {
    const Draws d = draw(spec);
    const auto dates = synth_dates(spec);
    const auto days = static_cast<std::size_t>(spec.days);

    std::vector<double> bench(days);
    bench[0] = 100.0;
    for (std::size_t k = 1; k < days; ++k) bench[k] = bench[k - 1] * (1.0 + d.benchmark_returns[k - 1]);

    std::vector<PriceSeries> indices;
    for (int i = 0; i < spec.n_indices; ++i) {
        std::vector<double> levels(days);
        double ratio = 1.0;
        levels[0] = bench[0] * ratio;
        for (std::size_t k = 1; k < days; ++k) {
            ratio *= 1.0 + d.excess(static_cast<Eigen::Index>(k - 1), i);
            levels[k] = bench[k] * ratio;
        }
        indices.emplace_back("index_" + std::to_string(i + 1), dates, std::move(levels));
    }
    return AlignedPanel(PriceSeries("benchmark", dates, std::move(bench)), std::move(indices));
}

}  // namespace xsalpha
