#pragma once

#include <Eigen/Dense>

#include "spillover/correlation.hpp"

namespace spillover {

/// Guards applied to the regressor correlation matrix before attribution.
struct AttributionGuards {
    double psd_floor = 1e-10;        // eigenvalue floor for rank-based matrices
    double max_condition = 1e12;     // condition number triggering the ridge
    double ridge = 1e-8;             // one-shot diagonal shrinkage amount
};

/// Split the explained variance of a regression into nonnegative
/// per-regressor shares that sum to R^2, via the orthogonal-transformation
/// (symmetric square root) construction:
///   R_X = V D V',  L = V D^{1/2} V',  beta = L^{-1} r_xy,
///   share_j = sum_m L(j,m)^2 beta(m)^2.
///
/// `rx` is the regressor correlation matrix, `rxy` the regressor-response
/// correlation vector. Rank-based matrices are eigenvalue-clipped to PSD
/// and an ill-conditioned matrix receives one ridge pass; if it is still
/// ill-conditioned a numeric_error is thrown (rolling callers turn that
/// into a gap record).
Eigen::VectorXd attribution_from_correlations(const Eigen::MatrixXd& rx,
                                              const Eigen::VectorXd& rxy,
                                              bool rank_based,
                                              const AttributionGuards& guards = {});

/// Convenience entry for raw data: computes the correlation structure of
/// (X, y) under `method` and delegates to the correlation form above.
Eigen::VectorXd relative_weights(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 CorrMethod method = CorrMethod::pearson,
                                 const AttributionGuards& guards = {});

/// R^2 implied by the same correlation structure: rxy' RX^{-1} rxy.
double implied_r2(const Eigen::MatrixXd& rx, const Eigen::VectorXd& rxy);

}  // namespace spillover
