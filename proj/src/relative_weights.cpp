#include "spillover/relative_weights.hpp"

#include <cmath>

#include "spillover/errors.hpp"
#include "spillover/linalg.hpp"

namespace spillover {

namespace {

// Condition check via eigenvalue range; returns true when usable.
bool well_conditioned(const Eigen::MatrixXd& rx, double max_condition, double* min_eig) {
    const auto range = symmetric_eigen_range(rx);
    if (min_eig) *min_eig = range.min;
    if (range.min <= 0.0) return false;
    return range.max / range.min <= max_condition;
}

}  // namespace

Eigen::VectorXd attribution_from_correlations(const Eigen::MatrixXd& rx,
                                              const Eigen::VectorXd& rxy,
                                              bool rank_based,
                                              const AttributionGuards& guards) {
    const Eigen::Index p = rx.rows();
    if (rx.cols() != p || rxy.size() != p)
        throw numeric_error("attribution: mismatched dimensions");
    if (p == 0) throw numeric_error("attribution: empty design");

    Eigen::MatrixXd r = rx;
    if (rank_based) r = clip_to_correlation(r, guards.psd_floor);

    if (!well_conditioned(r, guards.max_condition, nullptr)) {
        // One shrinkage pass toward the identity, preserving unit diagonal.
        r = (r + guards.ridge * Eigen::MatrixXd::Identity(p, p)) / (1.0 + guards.ridge);
        if (!well_conditioned(r, guards.max_condition, nullptr))
            throw numeric_error("regressor correlation matrix not positive definite after guard");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
    if (es.info() != Eigen::Success) throw numeric_error("attribution: eigensolver failed");
    const Eigen::VectorXd lambda_sqrt = es.eigenvalues().cwiseSqrt();
    const Eigen::MatrixXd loadings =
        es.eigenvectors() * lambda_sqrt.asDiagonal() * es.eigenvectors().transpose();

    // beta solves L beta = rxy; go through the eigensystem already at hand.
    const Eigen::VectorXd beta = es.eigenvectors() *
                                 (es.eigenvectors().transpose() * rxy).cwiseQuotient(lambda_sqrt);

    Eigen::VectorXd shares(p);
    const Eigen::VectorXd beta_sq = beta.cwiseAbs2();
    for (Eigen::Index j = 0; j < p; ++j)
        shares(j) = loadings.row(j).cwiseAbs2().dot(beta_sq);
    return shares;
}

Eigen::VectorXd relative_weights(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 CorrMethod method, const AttributionGuards& guards) {
    if (x.rows() != y.size()) throw numeric_error("relative_weights: mismatched dimensions");
    Eigen::MatrixXd joint(x.rows(), x.cols() + 1);
    joint.leftCols(x.cols()) = x;
    joint.col(x.cols()) = y;
    const Eigen::MatrixXd full = column_correlation(joint, method);
    const Eigen::MatrixXd rx = full.topLeftCorner(x.cols(), x.cols());
    const Eigen::VectorXd rxy = full.topRightCorner(x.cols(), 1);
    return attribution_from_correlations(rx, rxy, method != CorrMethod::pearson, guards);
}

double implied_r2(const Eigen::MatrixXd& rx, const Eigen::VectorXd& rxy) {
    return rxy.dot(solve_spd(rx, rxy));
}

}  // namespace spillover
