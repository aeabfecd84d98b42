#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <string>
#include <vector>

#include "xsalpha/signal.hpp"

namespace xsalpha {

/// Calendar-day annualisation used throughout (returns x 365.25, vols x sqrt(365.25)).
inline constexpr double kDaysPerYear = 365.25;

/// Daily tracking-error variance budget for an annual tracking error.
inline double daily_te_variance(double sigma_annual) { return sigma_annual * sigma_annual / kDaysPerYear; }

/// Per-position weight box, benchmark at position 0.
struct BoundSet {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    /// Indices in [0, 1], benchmark in [0, 1].
    static BoundSet long_only(std::size_t n_indices);
    /// Indices in [-1, 1], benchmark in [0, 1].
    static BoundSet long_short(std::size_t n_indices);

    std::size_t size() const noexcept { return static_cast<std::size_t>(lower.size()); }
    /// Throws ValidationError when lower > upper anywhere or an index box excludes 0.
    void validate() const;
};

/// Portfolio fractions, benchmark first; sums to one.
struct WeightVector {
    std::vector<std::string> names;
    Eigen::VectorXd weights;

    double sum() const { return weights.sum(); }
};

struct SolveOutcome {
    WeightVector weights;
    double max_excess_return = 0.0;     ///< daily
    double realized_te_variance = 0.0;  ///< daily, x'Omega x
    std::string stage1_status;
    std::string stage2_status;
    long iterations = 0;
};

struct SolverOptions {
    /// One-sided relaxation of the return level in the variance stage (daily units).
    double return_tolerance = 1e-9;
    long max_iterations_per_stage = 10'000;
    std::chrono::milliseconds time_budget_per_stage{5'000};
};

/// Two-stage solve: find the largest window excess return reachable inside
/// the bounds with x'Omega x <= sigma_annual^2 / 365.25, then return the
/// minimum-variance portfolio among those reaching it.
///
/// The benchmark weight is eliminated as 1 - sum(index weights); its zero
/// row in omega makes it a free hedge. Ties among variance minimisers are
/// broken toward the smallest sum of squared index weights.
SolveOutcome solve(const ExcessStats& stats, const BoundSet& bounds, double sigma_annual,
                   const SolverOptions& options = {});

/// Exhaustive grid search over index weights (n <= 4), benchmark weight
/// filling the remainder. Test oracle for solve().
SolveOutcome brute_force_solve(const ExcessStats& stats, const BoundSet& bounds, double sigma_annual,
                               double grid_step);

}  // namespace xsalpha
