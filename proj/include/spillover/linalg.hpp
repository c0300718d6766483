#pragma once

#include <Eigen/Dense>

namespace spillover {

/// Solve A x = b for symmetric positive-definite A by unpivoted Cholesky
/// carried out in extended precision, rounding the result to double.
/// Small systems only (portfolio-sized). Throws numeric_error if a pivot
/// is not strictly positive.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// Minimum and maximum eigenvalue of a symmetric matrix.
struct EigenRange {
    double min;
    double max;
};
EigenRange symmetric_eigen_range(const Eigen::MatrixXd& a);

/// Clip eigenvalues of a symmetric matrix below `floor` up to `floor`,
/// then rescale to unit diagonal. Used to repair Spearman/Kendall
/// pseudo-correlation matrices that need not be PSD.
Eigen::MatrixXd clip_to_correlation(const Eigen::MatrixXd& a, double floor);

/// Symmetric square root via eigendecomposition. Requires PSD input.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& a);

}  // namespace spillover
