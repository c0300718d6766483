#pragma once

#include <span>
#include <vector>

namespace spillover {

double mean(std::span<const double> x);

/// Sample variance, n-1 denominator.
double sample_variance(std::span<const double> x);
double sample_stddev(std::span<const double> x);

/// Central moment of given order with 1/n normalization.
double central_moment(std::span<const double> x, int order);

/// Empirical quantile with linear interpolation between order statistics
/// (the convention most stats packages default to).
double quantile(std::span<const double> x, double q);

struct SeriesSummary {
    double mean;
    double stddev;
    double q05;
    double q95;
};

SeriesSummary summarize(std::span<const double> x);

// Tail p-values, wrapped so callers never touch the GSL headers directly.
double chi_squared_sf(double x, double dof);          // P(X > x)
double student_t_two_sided(double t, double dof);     // 2 P(T > |t|)
double f_dist_sf(double f, double d1, double d2);     // P(F > f)
double normal_two_sided(double z);                    // 2 P(Z > |z|)

}  // namespace spillover
