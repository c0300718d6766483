#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "spillover/panel.hpp"

namespace spillover {

/// Time sequence of conditional covariance matrices with estimator
/// provenance, the object every hedge and portfolio formula consumes.
struct ConditionalCovariances {
    std::vector<Date> dates;
    std::vector<Eigen::MatrixXd> sigmas;  // K x K, symmetric PSD
    std::vector<std::string> assets;
    std::string method;                                  // "ewma" | "dcc"
    std::vector<std::pair<std::string, double>> params;  // estimator parameters
    std::vector<std::string> warnings;

    Eigen::Index size() const { return static_cast<Eigen::Index>(sigmas.size()); }

    /// Symmetry within 1e-12 and minimum eigenvalue >= -1e-10 for every t.
    void validate() const;
};

/// RiskMetrics-style recursion: Sigma_0 is the sample covariance over the
/// burn-in rows, then Sigma_t = lambda Sigma_{t-1} + (1-lambda) r_t r_t'.
/// Output is aligned to the dates after the burn-in.
ConditionalCovariances ewma_covariance(const ReturnPanel& panel, double lambda = 0.94,
                                       int burn_in = 60);

struct Garch11Fit {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> variance;  // conditional variance series, h_t
    double loglik = 0.0;
    bool converged = false;
};

/// Gaussian QMLE of a GARCH(1,1) via Nelder-Mead on transformed parameters
/// (positivity and alpha+beta<1 enforced by construction). h_0 is the
/// sample variance. Non-convergence returns the best point found with the
/// flag cleared.
Garch11Fit garch11_fit(std::span<const double> series);

struct DccFit {
    std::vector<Garch11Fit> univariate;
    double a = 0.0;
    double b = 0.0;
    bool converged = false;
    double loglik = 0.0;
};

/// Two-stage DCC(1,1): univariate GARCH fits, then QMLE of (a, b) on the
/// standardized residuals with Q_t = (1-a-b) Qbar + a eps eps' + b Q_{t-1}.
DccFit dcc_fit_params(const ReturnPanel& panel);
ConditionalCovariances dcc_covariance(const ReturnPanel& panel);

}  // namespace spillover
