#include "spillover/condcov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "spillover/errors.hpp"
#include "spillover/series_stats.hpp"

namespace spillover {

void ConditionalCovariances::validate() const {
    if (dates.size() != sigmas.size())
        throw numeric_error("covariance sequence: date/matrix count mismatch");
    for (std::size_t t = 0; t < sigmas.size(); ++t) {
        const Eigen::MatrixXd& s = sigmas[t];
        if ((s - s.transpose()).array().abs().maxCoeff() > 1e-12)
            throw numeric_error("covariance at " + dates[t].to_string() + " not symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < -1e-10)
            throw numeric_error("covariance at " + dates[t].to_string() +
                                " not positive semi-definite");
    }
}

ConditionalCovariances ewma_covariance(const ReturnPanel& panel, double lambda, int burn_in) {
    const Eigen::Index t_total = panel.rows();
    const Eigen::Index k = panel.cols();
    if (!(lambda > 0.0 && lambda < 1.0)) throw config_error("ewma lambda must be in (0,1)");
    if (burn_in < k + 1) throw config_error("ewma burn-in must be at least K+1");
    if (t_total <= burn_in) throw data_error("panel shorter than EWMA burn-in");

    const Eigen::MatrixXd head = panel.returns.topRows(burn_in);
    const Eigen::RowVectorXd mu = head.colwise().mean();
    const Eigen::MatrixXd centered = head.rowwise() - mu;
    Eigen::MatrixXd running =
        centered.transpose() * centered / static_cast<double>(burn_in - 1);

    ConditionalCovariances out;
    out.assets = panel.assets;
    out.method = "ewma";
    out.params = {{"lambda", lambda}, {"burn_in", static_cast<double>(burn_in)}};
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(running, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() <= 0.0)
            out.warnings.push_back("burn-in covariance is singular");
    }

    out.dates.reserve(static_cast<std::size_t>(t_total - burn_in));
    out.sigmas.reserve(static_cast<std::size_t>(t_total - burn_in));
    for (Eigen::Index t = burn_in; t < t_total; ++t) {
        const Eigen::VectorXd r = panel.returns.row(t).transpose();
        running = lambda * running + (1.0 - lambda) * (r * r.transpose());
        out.dates.push_back(panel.dates[static_cast<std::size_t>(t)]);
        out.sigmas.push_back(running);
    }
    return out;
}

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

/// Nelder-Mead with a fixed initial simplex; deterministic. Converged when
/// a full sweep of iterations improves the best objective value by less
/// than `tol` (or the simplex spread collapses below it); gives up after
/// `max_iter` iterations.
struct SimplexResult {
    Eigen::VectorXd x;
    double f = 0.0;
    bool converged = false;
};

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& fn,
                          const Eigen::VectorXd& start, double step, double tol,
                          int max_iter) {
    const Eigen::Index dim = start.size();
    const auto npts = static_cast<std::size_t>(dim + 1);
    std::vector<Eigen::VectorXd> pts(npts, start);
    for (Eigen::Index i = 0; i < dim; ++i) pts[static_cast<std::size_t>(i) + 1](i) += step;
    std::vector<double> fv(npts);
    for (std::size_t i = 0; i < npts; ++i) fv[i] = fn(pts[i]);

    std::vector<std::size_t> order(npts);
    SimplexResult res;
    double sweep_reference = *std::min_element(fv.begin(), fv.end());
    const int sweep_len = static_cast<int>(dim) + 1;
    for (int iter = 0; iter < max_iter; ++iter) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[npts - 1], second = order[npts - 2];
        if (fv[worst] - fv[best] < tol) {
            res.converged = true;
            break;
        }
        if (iter % sweep_len == sweep_len - 1) {
            if (sweep_reference - fv[best] < tol) {
                res.converged = true;
                break;
            }
            sweep_reference = fv[best];
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (std::size_t i = 0; i < npts; ++i)
            if (i != worst) centroid += pts[i];
        centroid /= static_cast<double>(dim);

        const Eigen::VectorXd reflected = centroid + (centroid - pts[worst]);
        const double fr = fn(reflected);
        if (fr < fv[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = fn(expanded);
            if (fe < fr) {
                pts[worst] = expanded;
                fv[worst] = fe;
            } else {
                pts[worst] = reflected;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            pts[worst] = reflected;
            fv[worst] = fr;
        } else {
            const Eigen::VectorXd contracted = centroid + 0.5 * (pts[worst] - centroid);
            const double fc = fn(contracted);
            if (fc < fv[worst]) {
                pts[worst] = contracted;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i < npts; ++i) {
                    if (i == best) continue;
                    pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                    fv[i] = fn(pts[i]);
                }
            }
        }
    }
    const std::size_t best =
        static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    res.x = pts[best];
    res.f = fv[best];
    return res;
}

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double garch_negll(std::span<const double> r, double omega, double alpha, double beta,
                   std::vector<double>* h_out) {
    const std::size_t n = r.size();
    double h = 0.0;
    {
        double m = 0.0;
        for (double v : r) m += v;
        m /= static_cast<double>(n);
        for (double v : r) h += (v - m) * (v - m);
        h /= static_cast<double>(n - 1);
    }
    double nll = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) h = omega + alpha * r[t - 1] * r[t - 1] + beta * h;
        if (!(h > 1e-300)) return 1e300;
        nll += 0.5 * (kLog2Pi + std::log(h) + r[t] * r[t] / h);
        if (h_out) (*h_out)[t] = h;
    }
    return nll;
}

}  // namespace

Garch11Fit garch11_fit(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 250) throw data_error("garch11_fit: need at least 250 observations");
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    if (*lo == *hi) throw data_error("degenerate series");
    const double var = sample_variance(series);

    std::vector<double> demeaned(series.begin(), series.end());
    const double m = mean(series);
    for (double& v : demeaned) v -= m;

    // theta = (log omega, logit(alpha+beta), logit(alpha/(alpha+beta)))
    auto unpack = [](const Eigen::VectorXd& theta, double& omega, double& alpha, double& beta) {
        omega = std::exp(std::clamp(theta(0), -60.0, 60.0));
        const double s = sigmoid(theta(1));
        const double f = sigmoid(theta(2));
        alpha = s * f;
        beta = s * (1.0 - f);
    };
    auto objective = [&](const Eigen::VectorXd& theta) {
        double omega, alpha, beta;
        unpack(theta, omega, alpha, beta);
        return garch_negll(demeaned, omega, alpha, beta, nullptr);
    };

    Eigen::VectorXd start(3);
    start(0) = std::log(var * (1.0 - 0.94));
    start(1) = logit(0.94);
    start(2) = logit(0.10);
    const auto sol = nelder_mead(objective, start, 0.25, 1e-8, 500);

    Garch11Fit fit;
    unpack(sol.x, fit.omega, fit.alpha, fit.beta);
    fit.variance.resize(n);
    fit.loglik = -garch_negll(demeaned, fit.omega, fit.alpha, fit.beta, &fit.variance);
    fit.converged = sol.converged;
    return fit;
}

DccFit dcc_fit_params(const ReturnPanel& panel) {
    const Eigen::Index t_total = panel.rows();
    const Eigen::Index k = panel.cols();
    if (k < 2) throw data_error("dcc_fit: need at least 2 assets");

    DccFit fit;
    fit.univariate.resize(static_cast<std::size_t>(k));
    std::vector<std::string> stage1_errors(static_cast<std::size_t>(k));
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(k); ++i) {
        try {
            std::span<const double> col(panel.returns.col(i).data(),
                                        static_cast<std::size_t>(t_total));
            fit.univariate[static_cast<std::size_t>(i)] = garch11_fit(col);
        } catch (const std::exception& e) {
            stage1_errors[static_cast<std::size_t>(i)] = e.what();
        }
    }
    for (Eigen::Index i = 0; i < k; ++i)
        if (!stage1_errors[static_cast<std::size_t>(i)].empty())
            throw data_error("dcc_fit stage 1 failed for " +
                             panel.assets[static_cast<std::size_t>(i)] + ": " +
                             stage1_errors[static_cast<std::size_t>(i)]);

    // Standardized residuals.
    Eigen::MatrixXd eps(t_total, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double mu = panel.returns.col(i).mean();
        for (Eigen::Index t = 0; t < t_total; ++t)
            eps(t, i) =
                (panel.returns(t, i) - mu) /
                std::sqrt(fit.univariate[static_cast<std::size_t>(i)]
                              .variance[static_cast<std::size_t>(t)]);
    }
    const Eigen::MatrixXd qbar = eps.transpose() * eps / static_cast<double>(t_total);

    auto correlation_nll = [&](double a, double b) {
        Eigen::MatrixXd q = qbar;
        double nll = 0.0;
        for (Eigen::Index t = 0; t < t_total; ++t) {
            if (t > 0) {
                const Eigen::VectorXd e_prev = eps.row(t - 1).transpose();
                q = (1.0 - a - b) * qbar + a * (e_prev * e_prev.transpose()) + b * q;
            }
            Eigen::VectorXd d = q.diagonal().cwiseSqrt();
            Eigen::MatrixXd r = q;
            for (Eigen::Index x = 0; x < k; ++x)
                for (Eigen::Index y = 0; y < k; ++y) r(x, y) /= d(x) * d(y);
            r.diagonal().setOnes();
            Eigen::LDLT<Eigen::MatrixXd> ldlt(r);
            if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return 1e300;
            const Eigen::VectorXd e_t = eps.row(t).transpose();
            const double logdet = ldlt.vectorD().array().log().sum();
            nll += 0.5 * (logdet + e_t.dot(ldlt.solve(e_t)) - e_t.squaredNorm());
        }
        return nll;
    };
    auto objective = [&](const Eigen::VectorXd& theta) {
        const double s = sigmoid(theta(0));
        const double f = sigmoid(theta(1));
        return correlation_nll(s * f, s * (1.0 - f));
    };

    Eigen::VectorXd start(2);
    start(0) = logit(0.95);
    start(1) = logit(0.05);
    const auto sol = nelder_mead(objective, start, 0.25, 1e-8, 500);
    const double s = sigmoid(sol.x(0));
    const double f = sigmoid(sol.x(1));
    fit.a = s * f;
    fit.b = s * (1.0 - f);
    fit.converged = sol.converged;
    fit.loglik = -sol.f;
    return fit;
}

ConditionalCovariances dcc_covariance(const ReturnPanel& panel) {
    const DccFit fit = dcc_fit_params(panel);
    const Eigen::Index t_total = panel.rows();
    const Eigen::Index k = panel.cols();

    Eigen::MatrixXd eps(t_total, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double mu = panel.returns.col(i).mean();
        for (Eigen::Index t = 0; t < t_total; ++t)
            eps(t, i) =
                (panel.returns(t, i) - mu) /
                std::sqrt(fit.univariate[static_cast<std::size_t>(i)]
                              .variance[static_cast<std::size_t>(t)]);
    }
    const Eigen::MatrixXd qbar = eps.transpose() * eps / static_cast<double>(t_total);

    ConditionalCovariances out;
    out.assets = panel.assets;
    out.method = "dcc";
    out.params = {{"dcc_a", fit.a}, {"dcc_b", fit.b}};
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto& g = fit.univariate[static_cast<std::size_t>(i)];
        out.params.emplace_back("omega_" + std::to_string(i), g.omega);
        out.params.emplace_back("alpha_" + std::to_string(i), g.alpha);
        out.params.emplace_back("beta_" + std::to_string(i), g.beta);
        if (!g.converged)
            out.warnings.push_back("garch fit did not converge for " +
                                   panel.assets[static_cast<std::size_t>(i)]);
    }
    if (!fit.converged) out.warnings.push_back("dcc stage 2 did not converge");

    Eigen::MatrixXd q = qbar;
    out.dates.reserve(static_cast<std::size_t>(t_total));
    out.sigmas.reserve(static_cast<std::size_t>(t_total));
    for (Eigen::Index t = 0; t < t_total; ++t) {
        if (t > 0) {
            const Eigen::VectorXd e_prev = eps.row(t - 1).transpose();
            q = (1.0 - fit.a - fit.b) * qbar + fit.a * (e_prev * e_prev.transpose()) +
                fit.b * q;
        }
        Eigen::VectorXd d = q.diagonal().cwiseSqrt();
        Eigen::MatrixXd r = q;
        for (Eigen::Index x = 0; x < k; ++x)
            for (Eigen::Index y = 0; y < k; ++y) r(x, y) /= d(x) * d(y);
        r.diagonal().setOnes();

        Eigen::VectorXd h(k), hroot(k);
        for (Eigen::Index i = 0; i < k; ++i) {
            h(i) = fit.univariate[static_cast<std::size_t>(i)].variance[static_cast<std::size_t>(t)];
            hroot(i) = std::sqrt(h(i));
        }
        Eigen::MatrixXd sigma(k, k);
        for (Eigen::Index x = 0; x < k; ++x) {
            sigma(x, x) = h(x);  // diagonal equals the univariate variance exactly
            for (Eigen::Index y = x + 1; y < k; ++y) {
                const double v = hroot(x) * hroot(y) * r(x, y);
                sigma(x, y) = v;
                sigma(y, x) = v;
            }
        }
        out.dates.push_back(panel.dates[static_cast<std::size_t>(t)]);
        out.sigmas.push_back(std::move(sigma));
    }
    return out;
}

}  // namespace spillover
