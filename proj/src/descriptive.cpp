#include "spillover/descriptive.hpp"

#include <cmath>
#include <limits>

#include "spillover/errors.hpp"
#include "spillover/series_stats.hpp"

namespace spillover {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

Moments describe(std::span<const double> series) {
    if (series.size() < 4) throw data_error("describe: need at least 4 observations");
    for (double v : series)
        if (!std::isfinite(v)) throw data_error("describe: non-finite observation");
    Moments m{};
    m.mean = mean(series);
    m.variance = sample_variance(series);
    const double m2 = central_moment(series, 2);
    if (m2 == 0.0) {
        m.skewness = kNaN;
        m.excess_kurtosis = kNaN;
        return m;
    }
    m.skewness = central_moment(series, 3) / std::pow(m2, 1.5);
    m.excess_kurtosis = central_moment(series, 4) / (m2 * m2) - 3.0;
    return m;
}

JarqueBera jarque_bera(std::span<const double> series) {
    if (series.size() < 8) throw data_error("jarque_bera: need at least 8 observations");
    const double m2 = central_moment(series, 2);
    if (m2 == 0.0) throw numeric_error("jarque_bera: zero variance");
    const double s = central_moment(series, 3) / std::pow(m2, 1.5);
    const double k = central_moment(series, 4) / (m2 * m2) - 3.0;
    const double n = static_cast<double>(series.size());
    const double stat = n * (s * s / 6.0 + k * k / 24.0);
    return JarqueBera{stat, chi_squared_sf(stat, 2.0)};
}

const char* significance_stars(SignificanceBand band) {
    switch (band) {
        case SignificanceBand::pct1: return "***";
        case SignificanceBand::pct5: return "**";
        case SignificanceBand::pct10: return "*";
        case SignificanceBand::none: return "";
    }
    return "";
}

namespace {

// OLS of y on columns of X; returns the t-statistic of coefficient 0.
double first_coefficient_tstat(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    if (n <= p) throw numeric_error("singular regression: too few observations");
    Eigen::MatrixXd xtx = x.transpose() * x;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw numeric_error("singular regression");
    Eigen::VectorXd beta = ldlt.solve(x.transpose() * y);
    const double ssr = (y - x * beta).squaredNorm();
    const double sigma2 = ssr / static_cast<double>(n - p);
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(p);
    e0(0) = 1.0;
    const double var0 = sigma2 * e0.dot(ldlt.solve(e0));
    if (!(var0 > 0.0)) throw numeric_error("singular regression");
    return beta(0) / std::sqrt(var0);
}

}  // namespace

ErsResult ers_dfgls(std::span<const double> series, int lag_order) {
    const auto n = static_cast<Eigen::Index>(series.size());
    if (n < 50) throw data_error("ers_dfgls: need at least 50 observations");
    if (lag_order < 0)
        lag_order = static_cast<int>(
            std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));

    // GLS demeaning with local-to-unity alpha = 1 + cbar/n, cbar = -7.
    const double alpha = 1.0 - 7.0 / static_cast<double>(n);
    Eigen::VectorXd zq(n), xq(n);
    zq(0) = series[0];
    xq(0) = 1.0;
    for (Eigen::Index t = 1; t < n; ++t) {
        zq(t) = series[static_cast<std::size_t>(t)] -
                alpha * series[static_cast<std::size_t>(t - 1)];
        xq(t) = 1.0 - alpha;
    }
    const double xqsq = xq.squaredNorm();
    if (xqsq == 0.0) throw numeric_error("singular regression");
    const double level = xq.dot(zq) / xqsq;

    Eigen::VectorXd detrended(n);
    for (Eigen::Index t = 0; t < n; ++t)
        detrended(t) = series[static_cast<std::size_t>(t)] - level;

    // ADF regression without deterministic terms on the demeaned series:
    // diff_t = phi * y_{t-1} + sum_j gamma_j diff_{t-j}.
    const int q = lag_order;
    const Eigen::Index rows = n - 1 - q;
    if (rows < q + 5) throw data_error("ers_dfgls: series too short for lag order");
    Eigen::VectorXd diff(n - 1);
    for (Eigen::Index t = 0; t + 1 < n; ++t) diff(t) = detrended(t + 1) - detrended(t);

    Eigen::MatrixXd x(rows, 1 + q);
    Eigen::VectorXd y(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index t = r + q;  // index into diff
        y(r) = diff(t);
        x(r, 0) = detrended(t);
        for (int j = 1; j <= q; ++j) x(r, j) = diff(t - j);
    }

    const double variation = (detrended.array() - detrended.mean()).abs().maxCoeff();
    if (variation == 0.0) throw numeric_error("singular regression: constant series");

    double tstat = 0.0;
    try {
        tstat = first_coefficient_tstat(x, y);
    } catch (const numeric_error&) {
        throw numeric_error("singular regression");
    }

    ErsResult res{};
    res.stat = tstat;
    res.lag_order = q;
    res.crit_1pct = -2.58;
    res.crit_5pct = -1.95;
    res.crit_10pct = -1.62;
    if (tstat < res.crit_1pct)
        res.band = SignificanceBand::pct1;
    else if (tstat < res.crit_5pct)
        res.band = SignificanceBand::pct5;
    else if (tstat < res.crit_10pct)
        res.band = SignificanceBand::pct10;
    else
        res.band = SignificanceBand::none;
    return res;
}

std::vector<StatsRecord> describe_panel(const ReturnPanel& panel, int ers_lag) {
    std::vector<StatsRecord> out;
    out.reserve(static_cast<std::size_t>(panel.cols()));
    for (Eigen::Index k = 0; k < panel.cols(); ++k) {
        std::span<const double> col(panel.returns.col(k).data(),
                                    static_cast<std::size_t>(panel.rows()));
        StatsRecord rec;
        rec.asset = panel.assets[static_cast<std::size_t>(k)];
        rec.moments = describe(col);
        rec.jb = jarque_bera(col);
        rec.ers = ers_dfgls(col, ers_lag);
        out.push_back(std::move(rec));
    }
    return out;
}

CorrMatrix correlation_matrix(const ReturnPanel& panel, CorrMethod method, double mask_level) {
    const Eigen::Index t = panel.rows();
    const Eigen::Index k = panel.cols();
    if (t < 5) throw data_error("correlation_matrix: need at least 5 rows");

    CorrMatrix out;
    out.method = method;
    out.mask_level = mask_level;
    out.assets = panel.assets;
    try {
        out.values = column_correlation(panel.returns, method);
    } catch (const numeric_error& e) {
        throw numeric_error(std::string("correlation_matrix: ") + e.what());
    }

    const double n = static_cast<double>(t);
    out.pvalues = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j) {
            const double r = out.values(i, j);
            double p = 0.0;
            if (method == CorrMethod::kendall) {
                const double sigma = std::sqrt(2.0 * (2.0 * n + 5.0) / (9.0 * n * (n - 1.0)));
                p = normal_two_sided(r / sigma);
            } else {
                const double r2 = std::min(r * r, 1.0);
                if (r2 >= 1.0) {
                    p = 0.0;
                } else {
                    const double tval = r * std::sqrt((n - 2.0) / (1.0 - r2));
                    p = student_t_two_sided(tval, n - 2.0);
                }
            }
            out.pvalues(i, j) = p;
            out.pvalues(j, i) = p;
        }
    return out;
}

}  // namespace spillover
