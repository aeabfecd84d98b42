#include "xsalpha/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xsalpha/errors.hpp"
#include "xsalpha/qp.hpp"

namespace xsalpha {

BoundSet BoundSet::long_only(std::size_t n_indices) {
    const auto m = static_cast<Eigen::Index>(n_indices + 1);
    return {Eigen::VectorXd::Zero(m), Eigen::VectorXd::Ones(m)};
}

BoundSet BoundSet::long_short(std::size_t n_indices) {
    const auto m = static_cast<Eigen::Index>(n_indices + 1);
    BoundSet b{Eigen::VectorXd::Constant(m, -1.0), Eigen::VectorXd::Ones(m)};
    b.lower(0) = 0.0;
    return b;
}

void BoundSet::validate() const {
    if (lower.size() != upper.size() || lower.size() < 2) {
        throw ValidationError("bound vectors must have equal length covering benchmark and indices");
    }
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower(i)) || !std::isfinite(upper(i)) || lower(i) > upper(i)) {
            throw ValidationError("bound " + std::to_string(i) + " has lower > upper");
        }
        if (i >= 1 && (lower(i) > 0.0 || upper(i) < 0.0)) {
            throw ValidationError("index bound " + std::to_string(i) + " must contain 0");
        }
    }
}

namespace {

struct Problem {
    Eigen::Index n = 0;     // index count
    Eigen::VectorXd delta;  // index part
    Eigen::MatrixXd omega;  // index block
    Eigen::VectorXd lo, hi;
    double bench_lo = 0.0, bench_hi = 1.0;
    double variance_cap = 0.0;
};

Problem make_problem(const ExcessStats& stats, const BoundSet& bounds, double sigma_annual) {
    if (!(sigma_annual > 0.0) || !std::isfinite(sigma_annual)) throw ValidationError("sigma_annual must be positive");
    bounds.validate();
    const auto m = static_cast<Eigen::Index>(stats.size());
    if (m < 2 || stats.omega.rows() != m || stats.omega.cols() != m) {
        throw DimensionError("excess statistics are malformed");
    }
    if (static_cast<Eigen::Index>(bounds.size()) != m) {
        throw DimensionError("bounds have " + std::to_string(bounds.size()) + " entries, statistics have " +
                             std::to_string(m));
    }
    if (stats.delta(0) != 0.0 || !stats.omega.row(0).isZero(0.0) || !stats.omega.col(0).isZero(0.0)) {
        throw ValidationError("benchmark entries of delta and omega must be zero");
    }
    Problem p;
    p.n = m - 1;
    p.delta = stats.delta.tail(p.n);
    p.omega = stats.omega.bottomRightCorner(p.n, p.n);
    p.lo = bounds.lower.tail(p.n);
    p.hi = bounds.upper.tail(p.n);
    p.bench_lo = bounds.lower(0);
    p.bench_hi = bounds.upper(0);
    p.variance_cap = daily_te_variance(sigma_annual);

    if (p.lo.sum() + p.bench_lo > 1.0 || p.hi.sum() + p.bench_hi < 1.0) {
        throw InfeasibleError("no portfolio summing to one fits inside the bounds");
    }
    if (p.bench_lo > 1.0 || p.bench_hi < 1.0) {
        throw InfeasibleError("the all-benchmark portfolio violates the benchmark bounds");
    }
    return p;
}

// Variance-minimisation QP over index weights y at return level `target`.
// Objective y'(Omega + tau I)y; tau selects the smallest-exposure minimiser.
class LevelSolver {
public:
    explicit LevelSolver(const Problem& p) : p_(p) {
        const Eigen::Index n = p.n;
        const double scale = p.omega.trace() / static_cast<double>(n);
        const double tau = scale > 0.0 ? 1e-10 * scale : 1.0;
        qp_.G = 2.0 * p.omega;
        qp_.G.diagonal().array() += 2.0 * tau;
        qp_.g = Eigen::VectorXd::Zero(n);

        std::vector<Eigen::Index> fixed;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (p.lo(i) == p.hi(i)) fixed.push_back(i);
        }
        qp_.E = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(fixed.size()));
        qp_.e.resize(static_cast<Eigen::Index>(fixed.size()));
        for (std::size_t k = 0; k < fixed.size(); ++k) {
            qp_.E(fixed[k], static_cast<Eigen::Index>(k)) = 1.0;
            qp_.e(static_cast<Eigen::Index>(k)) = p.lo(fixed[k]);
        }

        // Column order: index lower bounds, index upper bounds, benchmark
        // upper (sum y >= 1 - hi0), benchmark lower (sum y <= 1 - lo0), return level.
        const Eigen::Index free = n - static_cast<Eigen::Index>(fixed.size());
        const Eigen::Index cols = 2 * free + 3;
        qp_.C = Eigen::MatrixXd::Zero(n, cols);
        qp_.c = Eigen::VectorXd::Zero(cols);
        Eigen::Index col = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (p.lo(i) == p.hi(i)) continue;
            qp_.C(i, col) = 1.0;
            qp_.c(col++) = p.lo(i);
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            if (p.lo(i) == p.hi(i)) continue;
            qp_.C(i, col) = -1.0;
            qp_.c(col++) = -p.hi(i);
        }
        qp_.C.col(col).setOnes();
        qp_.c(col++) = 1.0 - p.bench_hi;
        qp_.C.col(col).setConstant(-1.0);
        qp_.c(col++) = p.bench_lo - 1.0;
        qp_.C.col(col) = p.delta;
        return_col_ = col;
    }

    QpResult at(double target, const QpBudget& budget) {
        qp_.c(return_col_) = target;
        return solve_qp(qp_, budget);
    }

    double variance(const Eigen::VectorXd& y) const { return y.dot(p_.omega * y); }

private:
    const Problem& p_;
    QuadraticProgram qp_;
    Eigen::Index return_col_ = 0;
};

Eigen::VectorXd full_weights(const Eigen::VectorXd& y) {
    Eigen::VectorXd x(y.size() + 1);
    x(0) = 1.0 - y.sum();
    x.tail(y.size()) = y;
    return x;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Box-constrained upper bound on delta'y ignoring the sum constraint.
double relaxed_return_bound(const Problem& p) {
    double hi = 0.0;
    for (Eigen::Index i = 0; i < p.n; ++i) hi += std::max(p.delta(i) * p.lo(i), p.delta(i) * p.hi(i));
    return hi;
}

}  // namespace

SolveOutcome solve(const ExcessStats& stats, const BoundSet& bounds, double sigma_annual,
                   const SolverOptions& options) {
    const Problem p = make_problem(stats, bounds, sigma_annual);
    LevelSolver level(p);
    SolveOutcome out;
    out.weights.names = stats.names;

    // Stage 1: largest return level whose minimum-variance portfolio fits the
    // variance budget. The level -> minimum variance map is convex and
    // nondecreasing, so feasibility is monotone in the level and bisection
    // applies. Level 0 is always reachable by the all-benchmark portfolio.
    const auto stage1_deadline = std::chrono::steady_clock::now() + options.time_budget_per_stage;
    long stage1_iterations = 0;
    auto budget_for = [&](long used, std::chrono::steady_clock::time_point deadline) {
        QpBudget b;
        b.max_iterations = std::max(0L, options.max_iterations_per_stage - used);
        b.deadline = deadline;
        return b;
    };
    Eigen::VectorXd best_y = Eigen::VectorXd::Zero(p.n);
    auto check_budget = [&](const QpResult& r, const char* stage) {
        if (r.status == QpStatus::iteration_limit || r.status == QpStatus::time_limit) {
            throw ConvergenceError(std::string(stage) + " exceeded its budget", to_string(r.status),
                                   to_std(full_weights(best_y)));
        }
        if (r.status == QpStatus::not_convex) {
            throw ConvergenceError(std::string(stage) + " met a non-convex subproblem", to_string(r.status),
                                   to_std(full_weights(best_y)));
        }
    };
    auto admissible = [&](double target) {
        const QpResult r = level.at(target, budget_for(stage1_iterations, stage1_deadline));
        stage1_iterations += r.iterations;
        check_budget(r, "return maximisation");
        if (r.status != QpStatus::optimal) return false;
        if (level.variance(r.x) > p.variance_cap) return false;
        if (p.delta.dot(r.x) > p.delta.dot(best_y)) best_y = r.x;
        return true;
    };

    double lo = 0.0;
    double hi = relaxed_return_bound(p);
    bool te_binding = false;
    if (hi > 0.0 && !admissible(hi)) {
        te_binding = true;
        const double tolerance = 1e-12 * hi;
        while (hi - lo > tolerance) {
            const double mid = 0.5 * (lo + hi);
            if (admissible(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    out.max_excess_return = std::max(0.0, p.delta.dot(best_y));
    out.stage1_status = te_binding ? "optimal_te_binding" : "optimal";

    // Stage 2: minimum variance among portfolios within return_tolerance of
    // the maximum. The variance cap is implied by stage 1's witness.
    const auto stage2_deadline = std::chrono::steady_clock::now() + options.time_budget_per_stage;
    const QpResult r2 =
        level.at(out.max_excess_return - options.return_tolerance, budget_for(0, stage2_deadline));
    check_budget(r2, "variance minimisation");
    Eigen::VectorXd y = r2.status == QpStatus::optimal ? r2.x : best_y;
    out.stage2_status = to_string(r2.status);
    // Snap sub-ulp bound excursions from the active-set arithmetic.
    y = y.cwiseMax(p.lo).cwiseMin(p.hi);
    out.weights.weights = full_weights(y);
    out.realized_te_variance = level.variance(y);
    out.iterations = stage1_iterations + r2.iterations;
    return out;
}

SolveOutcome brute_force_solve(const ExcessStats& stats, const BoundSet& bounds, double sigma_annual,
                               double grid_step) {
    if (stats.size() > 5) throw DimensionError("grid oracle supports at most 4 indices");
    if (!(grid_step > 0.0)) throw ValidationError("grid_step must be positive");
    const Problem p = make_problem(stats, bounds, sigma_annual);

    std::vector<std::vector<double>> axes(static_cast<std::size_t>(p.n));
    for (Eigen::Index i = 0; i < p.n; ++i) {
        auto& axis = axes[static_cast<std::size_t>(i)];
        axis.push_back(p.lo(i));
        const auto k0 = static_cast<long>(std::ceil(p.lo(i) / grid_step));
        const auto k1 = static_cast<long>(std::floor(p.hi(i) / grid_step));
        for (long k = k0; k <= k1; ++k) axis.push_back(static_cast<double>(k) * grid_step);
        axis.push_back(p.hi(i));
        std::sort(axis.begin(), axis.end());
        axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
        if (axis.size() > 201) throw ValidationError("grid_step too fine: more than 200 steps on an axis");
    }

    const double tie = 1e-12 * std::max(p.delta.cwiseAbs().maxCoeff(), 1e-300);
    bool found = false;
    double best_ret = 0.0;
    double best_var = 0.0;
    Eigen::VectorXd best_y;
    Eigen::VectorXd y(p.n);
    std::vector<std::size_t> at(static_cast<std::size_t>(p.n), 0);
    while (true) {
        for (Eigen::Index i = 0; i < p.n; ++i) y(i) = axes[static_cast<std::size_t>(i)][at[static_cast<std::size_t>(i)]];
        const double x0 = 1.0 - y.sum();
        if (x0 >= p.bench_lo - 1e-12 && x0 <= p.bench_hi + 1e-12) {
            const double var = y.dot(p.omega * y);
            if (var <= p.variance_cap) {
                const double ret = p.delta.dot(y);
                if (!found || ret > best_ret + tie || (ret >= best_ret - tie && var < best_var)) {
                    found = true;
                    best_ret = ret;
                    best_var = var;
                    best_y = y;
                }
            }
        }
        std::size_t d = 0;
        while (d < at.size() && ++at[d] == axes[d].size()) at[d++] = 0;
        if (d == at.size()) break;
    }
    if (!found) throw InfeasibleError("no grid point satisfies the bounds and the tracking-error budget");

    SolveOutcome out;
    out.weights.names = stats.names;
    out.weights.weights = full_weights(best_y);
    out.max_excess_return = best_ret;
    out.realized_te_variance = best_var;
    out.stage1_status = "grid";
    out.stage2_status = "grid";
    return out;
}

}  // namespace xsalpha
