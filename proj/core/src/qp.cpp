#include "xsalpha/qp.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace xsalpha {

std::string to_string(QpStatus status) {
    switch (status) {
        case QpStatus::optimal: return "optimal";
        case QpStatus::infeasible: return "infeasible";
        case QpStatus::iteration_limit: return "iteration_limit";
        case QpStatus::time_limit: return "time_limit";
        case QpStatus::not_convex: return "not_convex";
    }
    return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Active-set factorisation state: J is n x n, the first `iq` columns of R
// hold the upper-triangular factor of the active constraint normals.
class ActiveSet {
public:
    ActiveSet(const Eigen::MatrixXd& Linv_t) : J(Linv_t), R(Eigen::MatrixXd::Zero(Linv_t.rows(), Linv_t.rows())) {}

    Eigen::MatrixXd J;
    Eigen::MatrixXd R;
    int iq = 0;
    double r_norm = 1.0;

    // z = step direction in primal space, r = dual direction.
    void directions(const Eigen::VectorXd& np, Eigen::VectorXd& d, Eigen::VectorXd& z, Eigen::VectorXd& r) const {
        const auto n = J.rows();
        d = J.transpose() * np;
        z = J.rightCols(n - iq) * d.tail(n - iq);
        r.resize(iq);
        for (int i = iq - 1; i >= 0; --i) {
            double sum = d(i);
            for (int j = i + 1; j < iq; ++j) sum -= R(i, j) * r(j);
            r(i) = sum / R(i, i);
        }
    }

    bool add(Eigen::VectorXd d) {
        const int n = static_cast<int>(J.rows());
        for (int j = n - 1; j >= iq + 1; --j) {
            double cc = d(j - 1);
            double ss = d(j);
            const double h = std::hypot(cc, ss);
            if (h == 0.0) continue;
            d(j) = 0.0;
            ss /= h;
            cc /= h;
            if (cc < 0.0) {
                cc = -cc;
                ss = -ss;
                d(j - 1) = -h;
            } else {
                d(j - 1) = h;
            }
            const double xny = ss / (1.0 + cc);
            for (int k = 0; k < n; ++k) {
                const double t1 = J(k, j - 1);
                const double t2 = J(k, j);
                J(k, j - 1) = t1 * cc + t2 * ss;
                J(k, j) = xny * (t1 + J(k, j - 1)) - t2;
            }
        }
        ++iq;
        for (int i = 0; i < iq; ++i) R(i, iq - 1) = d(i);
        if (std::abs(d(iq - 1)) <= std::numeric_limits<double>::epsilon() * r_norm) return false;
        r_norm = std::max(r_norm, std::abs(d(iq - 1)));
        return true;
    }

    // Removes active position `l` and restores triangularity.
    void drop(int l) {
        const int n = static_cast<int>(J.rows());
        for (int j = l; j < iq - 1; ++j) R.col(j) = R.col(j + 1);
        R.col(iq - 1).setZero();
        --iq;
        if (iq == 0) return;
        for (int j = l; j < iq; ++j) {
            double cc = R(j, j);
            double ss = R(j + 1, j);
            const double h = std::hypot(cc, ss);
            if (h == 0.0) continue;
            cc /= h;
            ss /= h;
            R(j + 1, j) = 0.0;
            if (cc < 0.0) {
                R(j, j) = -h;
                cc = -cc;
                ss = -ss;
            } else {
                R(j, j) = h;
            }
            const double xny = ss / (1.0 + cc);
            for (int k = j + 1; k < iq; ++k) {
                const double t1 = R(j, k);
                const double t2 = R(j + 1, k);
                R(j, k) = t1 * cc + t2 * ss;
                R(j + 1, k) = xny * (t1 + R(j, k)) - t2;
            }
            for (int k = 0; k < n; ++k) {
                const double t1 = J(k, j);
                const double t2 = J(k, j + 1);
                J(k, j) = t1 * cc + t2 * ss;
                J(k, j + 1) = xny * (J(k, j) + t1) - t2;
            }
        }
    }
};

}  // namespace

QpResult solve_qp(const QuadraticProgram& qp, const QpBudget& budget) {
    const auto n = qp.G.rows();
    const auto me = qp.E.cols();
    const auto mi = qp.C.cols();
    QpResult out;

    Eigen::LLT<Eigen::MatrixXd> llt(qp.G);
    if (llt.info() != Eigen::Success) {
        out.status = QpStatus::not_convex;
        return out;
    }
    const Eigen::MatrixXd L = llt.matrixL();
    // J = L^{-T}
    const Eigen::MatrixXd Linv = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
    ActiveSet as(Linv.transpose());

    // Row-normalised constraints so residuals are distances.
    Eigen::MatrixXd E = qp.E;
    Eigen::VectorXd e = qp.e;
    for (Eigen::Index k = 0; k < me; ++k) {
        const double nrm = E.col(k).norm();
        if (nrm > 0.0) {
            E.col(k) /= nrm;
            e(k) /= nrm;
        }
    }
    Eigen::MatrixXd C = qp.C;
    Eigen::VectorXd c = qp.c;
    for (Eigen::Index k = 0; k < mi; ++k) {
        const double nrm = C.col(k).norm();
        if (nrm > 0.0) {
            C.col(k) /= nrm;
            c(k) /= nrm;
        }
    }

    Eigen::VectorXd x = -llt.solve(qp.g);
    Eigen::VectorXd d, z, r;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(me + mi);
    std::vector<Eigen::Index> active;  // constraint ids: equalities 0..me-1, inequalities me + k
    auto normal = [&](Eigen::Index id) -> Eigen::VectorXd { return id < me ? E.col(id) : C.col(id - me); };
    auto residual = [&](Eigen::Index id) {
        return id < me ? E.col(id).dot(x) - e(id) : C.col(id - me).dot(x) - c(id - me);
    };
    auto finish = [&](QpStatus s) {
        out.status = s;
        out.x = x;
        out.objective = 0.5 * x.dot(qp.G * x) + qp.g.dot(x);
        return out;
    };

    auto over_budget = [&]() -> std::optional<QpStatus> {
        if (out.iterations >= budget.max_iterations) return QpStatus::iteration_limit;
        if (std::chrono::steady_clock::now() > budget.deadline) return QpStatus::time_limit;
        return std::nullopt;
    };

    for (Eigen::Index k = 0; k < me; ++k) {
        ++out.iterations;
        const Eigen::VectorXd np = E.col(k);
        as.directions(np, d, z, r);
        double t2 = 0.0;
        if (z.squaredNorm() > std::numeric_limits<double>::epsilon()) t2 = -residual(k) / z.dot(np);
        x += t2 * z;
        u.head(as.iq) -= t2 * r;
        u(as.iq) = t2;
        active.push_back(k);
        if (!as.add(d)) return finish(QpStatus::infeasible);
    }

    std::vector<bool> is_active(static_cast<std::size_t>(mi), false);
    while (true) {
        if (auto s = over_budget()) return finish(*s);
        ++out.iterations;

        Eigen::Index p = -1;
        double worst = -kQpFeasibilityTolerance;
        for (Eigen::Index k = 0; k < mi; ++k) {
            if (is_active[static_cast<std::size_t>(k)]) continue;
            const double s = residual(me + k);
            if (s < worst) {
                worst = s;
                p = k;
            }
        }
        if (p < 0) return finish(QpStatus::optimal);

        const Eigen::Index pid = me + p;
        const Eigen::VectorXd np = normal(pid);
        double up = 0.0;  // multiplier of the constraint being added
        double sp = residual(pid);

        while (true) {
            if (auto s = over_budget()) return finish(*s);
            ++out.iterations;
            as.directions(np, d, z, r);

            // Partial step: first active inequality whose multiplier hits zero.
            double t1 = kInf;
            int l = -1;
            for (int k = 0; k < as.iq; ++k) {
                if (active[static_cast<std::size_t>(k)] < me) continue;
                if (r(k) > 0.0) {
                    const double ratio = u(k) / r(k);
                    if (ratio < t1) {
                        t1 = ratio;
                        l = k;
                    }
                }
            }
            double t2 = kInf;
            if (z.squaredNorm() > std::numeric_limits<double>::epsilon()) t2 = -sp / z.dot(np);

            const double t = std::min(t1, t2);
            if (!std::isfinite(t)) return finish(QpStatus::infeasible);

            if (!std::isfinite(t2)) {
                // Dual step only.
                u.head(as.iq) -= t * r;
                up += t;
                is_active[static_cast<std::size_t>(active[static_cast<std::size_t>(l)] - me)] = false;
                for (int k = l; k < as.iq - 1; ++k) u(k) = u(k + 1);
                active.erase(active.begin() + l);
                as.drop(l);
                continue;
            }

            x += t * z;
            u.head(as.iq) -= t * r;
            up += t;
            if (t == t2) {
                u(as.iq) = up;
                active.push_back(pid);
                is_active[static_cast<std::size_t>(p)] = true;
                if (!as.add(d)) return finish(QpStatus::infeasible);
                break;
            }
            is_active[static_cast<std::size_t>(active[static_cast<std::size_t>(l)] - me)] = false;
            for (int k = l; k < as.iq - 1; ++k) u(k) = u(k + 1);
            active.erase(active.begin() + l);
            as.drop(l);
            sp = residual(pid);
        }
    }
}

}  // namespace xsalpha
