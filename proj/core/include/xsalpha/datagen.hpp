#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "xsalpha/timeseries.hpp"

namespace xsalpha {

/// Synthetic universe description. Excess returns of index i follow
/// a(t) = mu_i + phi_i (a(t-1) - mu_i) + e_i(t) with correlated Gaussian e.
struct SynthSpec {
    std::uint64_t seed = 1;
    int days = 1000;  ///< number of panel dates
    int n_indices = 1;
    double benchmark_drift = 0.0;  ///< per day
    double benchmark_vol = 0.0;    ///< per sqrt(day)
    Eigen::VectorXd excess_drift;
    Eigen::VectorXd excess_vol;
    Eigen::VectorXd excess_ar1;
    Eigen::MatrixXd correlation;  ///< empty means identity
    Date start_date = parse_date("2000-01-03");
    bool weekdays_only = true;

    /// Spec with the same drift/vol/ar1 for every index and equicorrelated shocks.
    static SynthSpec uniform(std::uint64_t seed, int days, int n_indices, double excess_drift, double excess_vol,
                             double ar1, double rho = 0.0);

    void validate() const;
};

/// Standard normal draws from a fixed-width engine. std::normal_distribution
/// is implementation-defined, so draws are built here with Box-Muller on
/// 53-bit uniforms to keep panels identical across standard libraries.
class PortableNormal {
public:
    explicit PortableNormal(std::uint64_t seed) : engine_(seed) {}
    double operator()();

private:
    double uniform();
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Draws the benchmark first, then each index as benchmark x compounded
/// (1 + excess return). Identical specs give bit-identical panels.
AlignedPanel generate(const SynthSpec& spec);

/// The excess-return paths generate() used (rows = days - 1, cols = indices).
Eigen::MatrixXd generate_excess_paths(const SynthSpec& spec);

}  // namespace xsalpha
