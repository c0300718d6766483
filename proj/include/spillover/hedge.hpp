#pragma once

#include <span>
#include <string>
#include <vector>

#include "spillover/condcov.hpp"
#include "spillover/panel.hpp"
#include "spillover/series_stats.hpp"

namespace spillover {

/// beta_{ij,t} = Sigma_ij,t / Sigma_jj,t  (long i, short beta units of j).
std::vector<double> hedge_ratio_series(const ConditionalCovariances& cov, int i, int j);

/// Kroner-Ng bilateral weight of asset i in a 1-dollar (i, j) portfolio,
/// clamped into [0,1].
std::vector<double> bilateral_weight_series(const ConditionalCovariances& cov, int i, int j);

/// Returns of the hedged position r_i,t - beta_{t-1} r_j,t. The series
/// starts one step after the covariance sample; weights are always the
/// previous period's (no lookahead).
struct TimedSeries {
    std::vector<Date> dates;
    std::vector<double> values;
};

TimedSeries hedged_returns(const ReturnPanel& panel, const std::vector<Date>& series_dates,
                           std::span<const double> beta, int i, int j);

TimedSeries paired_portfolio_returns(const ReturnPanel& panel,
                                     const std::vector<Date>& series_dates,
                                     std::span<const double> weight, int i, int j);

struct HedgingEffectiveness {
    double he;      // 1 - var(portfolio)/var(reference)
    double pvalue;  // one-sided F test of var(reference) > var(portfolio)
};

HedgingEffectiveness hedging_effectiveness(std::span<const double> portfolio,
                                           std::span<const double> reference);

/// Everything the bilateral hedging table needs for one ordered pair.
struct HedgePairResult {
    std::string long_asset;
    std::string short_asset;
    SeriesSummary ratio_stats;       // of beta_{ij,t}
    SeriesSummary weight_stats;      // of w_{ij,t}
    HedgingEffectiveness he_hedged;  // beta-hedged position vs holding i
    HedgingEffectiveness he_paired;  // two-asset portfolio vs holding i
};

/// All K(K-1) ordered pairs; pairs run in parallel.
std::vector<HedgePairResult> hedge_all_pairs(const ReturnPanel& panel,
                                             const ConditionalCovariances& cov);

}  // namespace spillover
