#include <gtest/gtest.h>

#include <random>

#include "xsalpha/qp.hpp"

using namespace xsalpha;

TEST(SolveQp, Unconstrained) {
    QuadraticProgram qp;
    qp.G = Eigen::Matrix2d{{2.0, 0.0}, {0.0, 4.0}};
    qp.g = Eigen::Vector2d{-2.0, -4.0};
    qp.E.resize(2, 0);
    qp.e.resize(0);
    qp.C.resize(2, 0);
    qp.c.resize(0);
    const auto r = solve_qp(qp);
    ASSERT_EQ(r.status, QpStatus::optimal);
    EXPECT_NEAR(r.x(0), 1.0, 1e-14);
    EXPECT_NEAR(r.x(1), 1.0, 1e-14);
}

TEST(SolveQp, SimplexProjection) {
    // min |x - (0.9, 0.6, -0.2)|^2 on the probability simplex -> (0.65, 0.35, 0).
    QuadraticProgram qp;
    qp.G = 2.0 * Eigen::Matrix3d::Identity();
    qp.g = -2.0 * Eigen::Vector3d{0.9, 0.6, -0.2};
    qp.E = Eigen::Vector3d::Ones();
    qp.e = Eigen::VectorXd::Ones(1);
    qp.C = Eigen::Matrix3d::Identity();
    qp.c = Eigen::Vector3d::Zero();
    const auto r = solve_qp(qp);
    ASSERT_EQ(r.status, QpStatus::optimal);
    EXPECT_NEAR(r.x(0), 0.65, 1e-12);
    EXPECT_NEAR(r.x(1), 0.35, 1e-12);
    EXPECT_NEAR(r.x(2), 0.0, 1e-12);
}

TEST(SolveQp, DetectsInfeasibility) {
    QuadraticProgram qp;
    qp.G = Eigen::Matrix2d::Identity();
    qp.g = Eigen::Vector2d::Zero();
    qp.E.resize(2, 0);
    qp.e.resize(0);
    // x0 >= 1 and -x0 >= 0 cannot both hold.
    qp.C = Eigen::Matrix2d{{1.0, -1.0}, {0.0, 0.0}};
    qp.c = Eigen::Vector2d{1.0, 0.0};
    EXPECT_EQ(solve_qp(qp).status, QpStatus::infeasible);
}

TEST(SolveQp, RejectsIndefiniteHessian) {
    QuadraticProgram qp;
    qp.G = Eigen::Matrix2d{{1.0, 0.0}, {0.0, -1.0}};
    qp.g = Eigen::Vector2d::Zero();
    qp.E.resize(2, 0);
    qp.e.resize(0);
    qp.C.resize(2, 0);
    qp.c.resize(0);
    EXPECT_EQ(solve_qp(qp).status, QpStatus::not_convex);
}

TEST(SolveQp, IterationBudget) {
    QuadraticProgram qp;
    qp.G = Eigen::Matrix2d::Identity();
    qp.g = Eigen::Vector2d{-5.0, -5.0};
    qp.E.resize(2, 0);
    qp.e.resize(0);
    qp.C = -Eigen::Matrix2d::Identity();
    qp.c = Eigen::Vector2d{-1.0, -1.0};
    QpBudget budget;
    budget.max_iterations = 1;
    EXPECT_EQ(solve_qp(qp, budget).status, QpStatus::iteration_limit);
}

TEST(SolveQp, MatchesGridSearchIn2D) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        QuadraticProgram qp;
        Eigen::Matrix2d a{{u(rng), u(rng)}, {u(rng), u(rng)}};
        qp.G = a * a.transpose() + 0.1 * Eigen::Matrix2d::Identity();
        qp.g = Eigen::Vector2d{3 * u(rng), 3 * u(rng)};
        qp.E.resize(2, 0);
        qp.e.resize(0);
        // Box [-1, 1]^2 plus two random half-planes through points near the origin.
        qp.C.resize(2, 6);
        qp.c.resize(6);
        qp.C.leftCols(4) << 1, -1, 0, 0, 0, 0, 1, -1;
        qp.c.head(4) << -1, -1, -1, -1;
        for (int k = 4; k < 6; ++k) {
            qp.C.col(k) = Eigen::Vector2d{u(rng), u(rng)};
            qp.c(k) = -0.2;
        }
        const auto r = solve_qp(qp);
        ASSERT_EQ(r.status, QpStatus::optimal);
        EXPECT_GE((qp.C.transpose() * r.x - qp.c).minCoeff(), -1e-10);

        double best = std::numeric_limits<double>::infinity();
        const double h = 0.002;
        for (double x = -1; x <= 1 + 1e-12; x += h) {
            for (double y = -1; y <= 1 + 1e-12; y += h) {
                const Eigen::Vector2d p{x, y};
                if ((qp.C.transpose() * p - qp.c).minCoeff() < 0) continue;
                best = std::min(best, 0.5 * p.dot(qp.G * p) + qp.g.dot(p));
            }
        }
        EXPECT_LE(r.objective, best + 1e-12);
        EXPECT_GE(r.objective, best - 0.05);
    }
}
