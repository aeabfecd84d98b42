#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <string>

namespace xsalpha {

/// Dense strictly convex quadratic program
///
///     minimize    0.5 x'Gx + g'x
///     subject to  E'x = e        (one column of E per equality)
///                 C'x >= c       (one column of C per inequality)
///
/// solved with the Goldfarb-Idnani dual active-set method. G must be
/// positive definite. Constraints are visited in column order, which makes
/// the result deterministic for a given input.
struct QuadraticProgram {
    Eigen::MatrixXd G;
    Eigen::VectorXd g;
    Eigen::MatrixXd E;
    Eigen::VectorXd e;
    Eigen::MatrixXd C;
    Eigen::VectorXd c;
};

enum class QpStatus { optimal, infeasible, iteration_limit, time_limit, not_convex };

std::string to_string(QpStatus status);

struct QpBudget {
    long max_iterations = 10'000;
    std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
};

struct QpResult {
    QpStatus status = QpStatus::infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    long iterations = 0;
};

/// Feasibility tolerance on row-normalised constraint residuals.
inline constexpr double kQpFeasibilityTolerance = 1e-12;

QpResult solve_qp(const QuadraticProgram& qp, const QpBudget& budget = {});

}  // namespace xsalpha
