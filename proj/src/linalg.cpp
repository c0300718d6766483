#include "spillover/linalg.hpp"

#include <cmath>
#include <vector>

#include "spillover/errors.hpp"

namespace spillover {

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    const auto n = a.rows();
    if (a.cols() != n || b.size() != n) throw numeric_error("solve_spd: dimension mismatch");

    // Lower-triangular Cholesky factor in long double.
    std::vector<long double> l(static_cast<std::size_t>(n * n), 0.0L);
    auto at = [n](std::vector<long double>& m, Eigen::Index r, Eigen::Index c) -> long double& {
        return m[static_cast<std::size_t>(r * n + c)];
    };
    for (Eigen::Index j = 0; j < n; ++j) {
        long double diag = static_cast<long double>(a(j, j));
        for (Eigen::Index k = 0; k < j; ++k) diag -= at(l, j, k) * at(l, j, k);
        if (!(diag > 0.0L)) throw numeric_error("solve_spd: matrix not positive definite");
        const long double root = std::sqrt(diag);
        at(l, j, j) = root;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            long double v = static_cast<long double>(a(i, j));
            for (Eigen::Index k = 0; k < j; ++k) v -= at(l, i, k) * at(l, j, k);
            at(l, i, j) = v / root;
        }
    }

    std::vector<long double> y(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        long double v = static_cast<long double>(b(i));
        for (Eigen::Index k = 0; k < i; ++k) v -= at(l, i, k) * y[static_cast<std::size_t>(k)];
        y[static_cast<std::size_t>(i)] = v / at(l, i, i);
    }
    Eigen::VectorXd x(n);
    std::vector<long double> xe(static_cast<std::size_t>(n));
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        long double v = y[static_cast<std::size_t>(i)];
        for (Eigen::Index k = i + 1; k < n; ++k) v -= at(l, k, i) * xe[static_cast<std::size_t>(k)];
        xe[static_cast<std::size_t>(i)] = v / at(l, i, i);
        x(i) = static_cast<double>(xe[static_cast<std::size_t>(i)]);
    }
    return x;
}

EigenRange symmetric_eigen_range(const Eigen::MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numeric_error("eigenvalue computation failed");
    return EigenRange{es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

Eigen::MatrixXd clip_to_correlation(const Eigen::MatrixXd& a, double floor) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success)
        throw numeric_error("eigenvalue computation failed");
    if (es.eigenvalues().minCoeff() >= floor) return a;
    Eigen::VectorXd vals = es.eigenvalues().cwiseMax(floor);
    Eigen::MatrixXd repaired =
        es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
    Eigen::VectorXd d = repaired.diagonal().cwiseSqrt();
    for (Eigen::Index i = 0; i < repaired.rows(); ++i)
        for (Eigen::Index j = 0; j < repaired.cols(); ++j)
            repaired(i, j) /= d(i) * d(j);
    // Exact symmetry and unit diagonal regardless of rounding above.
    repaired = 0.5 * (repaired + repaired.transpose()).eval();
    repaired.diagonal().setOnes();
    return repaired;
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success)
        throw numeric_error("eigenvalue computation failed");
    if (es.eigenvalues().minCoeff() < 0.0)
        throw numeric_error("symmetric_sqrt: matrix not positive semi-definite");
    Eigen::VectorXd root = es.eigenvalues().cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace spillover
