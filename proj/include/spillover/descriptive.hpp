#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "spillover/correlation.hpp"
#include "spillover/panel.hpp"

namespace spillover {

/// Sample moments. Skewness and excess kurtosis use the moment form
/// (biased, 1/n central moments); variance uses the n-1 denominator.
/// Both are NaN when the series is constant.
struct Moments {
    double mean;
    double variance;
    double skewness;
    double excess_kurtosis;
};

Moments describe(std::span<const double> series);

struct JarqueBera {
    double stat;
    double pvalue;
};

/// JB = n (S^2/6 + K^2/24), p-value from chi-squared with 2 dof.
JarqueBera jarque_bera(std::span<const double> series);

enum class SignificanceBand { none, pct10, pct5, pct1 };

const char* significance_stars(SignificanceBand band);

struct ErsResult {
    double stat;                 // ADF t-statistic on the GLS-demeaned series
    SignificanceBand band;       // position against the fixed critical values
    int lag_order;
    double crit_1pct;
    double crit_5pct;
    double crit_10pct;
};

/// Elliott-Rothenberg-Stock DF-GLS unit-root test, constant-only variant
/// (cbar = -7). lag_order < 0 selects the Schwert rule
/// floor(12 (T/100)^{1/4}).
ErsResult ers_dfgls(std::span<const double> series, int lag_order = -1);

/// Full per-asset record backing one row of the descriptive table.
struct StatsRecord {
    std::string asset;
    Moments moments;
    JarqueBera jb;
    ErsResult ers;
};

std::vector<StatsRecord> describe_panel(const ReturnPanel& panel, int ers_lag = -1);

struct CorrMatrix {
    CorrMethod method;
    Eigen::MatrixXd values;   // K x K, unit diagonal
    Eigen::MatrixXd pvalues;  // K x K, zero diagonal
    double mask_level;        // cells with p >= mask_level are flagged
    std::vector<std::string> assets;

    bool insignificant(Eigen::Index i, Eigen::Index j) const {
        return i != j && pvalues(i, j) >= mask_level;
    }
};

CorrMatrix correlation_matrix(const ReturnPanel& panel, CorrMethod method,
                              double mask_level = 0.10);

}  // namespace spillover
