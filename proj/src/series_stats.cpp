#include "spillover/series_stats.hpp"

#include <gsl/gsl_cdf.h>

#include <algorithm>
#include <cmath>

#include "spillover/errors.hpp"

namespace spillover {

double mean(std::span<const double> x) {
    if (x.empty()) throw data_error("mean of empty series");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) throw data_error("variance needs at least 2 observations");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double sample_stddev(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

double central_moment(std::span<const double> x, int order) {
    if (x.empty()) throw data_error("moment of empty series");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += std::pow(v - m, order);
    return s / static_cast<double>(x.size());
}

double quantile(std::span<const double> x, double q) {
    if (x.empty()) throw data_error("quantile of empty series");
    if (q < 0.0 || q > 1.0) throw data_error("quantile level outside [0,1]");
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

SeriesSummary summarize(std::span<const double> x) {
    return SeriesSummary{mean(x), sample_stddev(x), quantile(x, 0.05), quantile(x, 0.95)};
}

double chi_squared_sf(double x, double dof) {
    if (x <= 0.0) return 1.0;
    return gsl_cdf_chisq_Q(x, dof);
}

double student_t_two_sided(double t, double dof) {
    if (!std::isfinite(t)) return 0.0;
    return 2.0 * gsl_cdf_tdist_Q(std::fabs(t), dof);
}

double f_dist_sf(double f, double d1, double d2) {
    if (!std::isfinite(f)) return 0.0;
    if (f <= 0.0) return 1.0;
    return gsl_cdf_fdist_Q(f, d1, d2);
}

double normal_two_sided(double z) {
    if (!std::isfinite(z)) return 0.0;
    return 2.0 * gsl_cdf_ugaussian_Q(std::fabs(z));
}

}  // namespace spillover
