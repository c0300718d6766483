#include "spillover/hedge.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "spillover/errors.hpp"

namespace spillover {

namespace {

void check_pair(const ConditionalCovariances& cov, int i, int j) {
    const auto k = cov.sigmas.empty() ? 0 : cov.sigmas.front().rows();
    if (cov.sigmas.empty()) throw data_error("empty covariance sequence");
    if (i < 0 || j < 0 || i >= k || j >= k) throw data_error("asset index out of range");
}

}  // namespace

std::vector<double> hedge_ratio_series(const ConditionalCovariances& cov, int i, int j) {
    check_pair(cov, i, j);
    std::vector<double> beta;
    beta.reserve(cov.sigmas.size());
    for (std::size_t t = 0; t < cov.sigmas.size(); ++t) {
        const double denom = cov.sigmas[t](j, j);
        if (!(denom > 0.0))
            throw numeric_error("zero conditional variance for asset " + std::to_string(j) +
                                " at " + cov.dates[t].to_string());
        beta.push_back(cov.sigmas[t](i, j) / denom);
    }
    return beta;
}

std::vector<double> bilateral_weight_series(const ConditionalCovariances& cov, int i, int j) {
    check_pair(cov, i, j);
    std::vector<double> w;
    w.reserve(cov.sigmas.size());
    for (std::size_t t = 0; t < cov.sigmas.size(); ++t) {
        const Eigen::MatrixXd& s = cov.sigmas[t];
        const double denom = (s(i, i) - s(i, j)) + (s(j, j) - s(i, j));
        if (!(denom > 0.0))
            throw numeric_error("non-positive bilateral denominator at " +
                                cov.dates[t].to_string());
        double raw = (s(i, i) - s(i, j)) / denom;
        w.push_back(std::clamp(raw, 0.0, 1.0));
    }
    return w;
}

namespace {

// Maps each series date to its panel row; throws on misalignment.
std::vector<Eigen::Index> panel_rows_for(const ReturnPanel& panel,
                                         const std::vector<Date>& dates) {
    std::map<int, Eigen::Index> row_of;
    for (std::size_t r = 0; r < panel.dates.size(); ++r)
        row_of[panel.dates[r].serial()] = static_cast<Eigen::Index>(r);
    std::vector<Eigen::Index> rows;
    rows.reserve(dates.size());
    for (const auto& d : dates) {
        auto it = row_of.find(d.serial());
        if (it == row_of.end())
            throw data_error("date misalignment: " + d.to_string() + " not in panel");
        rows.push_back(it->second);
    }
    return rows;
}

}  // namespace

TimedSeries hedged_returns(const ReturnPanel& panel, const std::vector<Date>& series_dates,
                           std::span<const double> beta, int i, int j) {
    if (series_dates.size() != beta.size()) throw data_error("date misalignment: beta series");
    const auto rows = panel_rows_for(panel, series_dates);
    TimedSeries out;
    for (std::size_t t = 1; t < rows.size(); ++t) {
        out.dates.push_back(series_dates[t]);
        out.values.push_back(panel.returns(rows[t], i) -
                             beta[t - 1] * panel.returns(rows[t], j));
    }
    return out;
}

TimedSeries paired_portfolio_returns(const ReturnPanel& panel,
                                     const std::vector<Date>& series_dates,
                                     std::span<const double> weight, int i, int j) {
    if (series_dates.size() != weight.size())
        throw data_error("date misalignment: weight series");
    const auto rows = panel_rows_for(panel, series_dates);
    TimedSeries out;
    for (std::size_t t = 1; t < rows.size(); ++t) {
        const double w = weight[t - 1];
        out.dates.push_back(series_dates[t]);
        out.values.push_back(w * panel.returns(rows[t], i) +
                             (1.0 - w) * panel.returns(rows[t], j));
    }
    return out;
}

HedgingEffectiveness hedging_effectiveness(std::span<const double> portfolio,
                                           std::span<const double> reference) {
    if (portfolio.size() != reference.size())
        throw data_error("hedging_effectiveness: length mismatch");
    if (portfolio.size() < 30)
        throw data_error("hedging_effectiveness: need at least 30 observations");
    const auto [ref_lo, ref_hi] = std::minmax_element(reference.begin(), reference.end());
    if (*ref_lo == *ref_hi) throw numeric_error("zero reference variance");
    const double var_ref = sample_variance(reference);
    const auto [p_lo, p_hi] = std::minmax_element(portfolio.begin(), portfolio.end());
    const double var_p = *p_lo == *p_hi ? 0.0 : sample_variance(portfolio);

    HedgingEffectiveness out;
    out.he = 1.0 - var_p / var_ref;
    const auto dof = static_cast<double>(portfolio.size() - 1);
    if (var_p == 0.0) {
        out.pvalue = 0.0;  // variance eliminated entirely
    } else {
        out.pvalue = f_dist_sf(var_ref / var_p, dof, dof);
    }
    return out;
}

std::vector<HedgePairResult> hedge_all_pairs(const ReturnPanel& panel,
                                             const ConditionalCovariances& cov) {
    const auto k = static_cast<int>(panel.cols());
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j) pairs.emplace_back(i, j);

    std::vector<HedgePairResult> results(pairs.size());
    std::vector<std::string> failures(pairs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(pairs.size()); ++n) {
        const auto [i, j] = pairs[static_cast<std::size_t>(n)];
        try {
            HedgePairResult res;
            res.long_asset = panel.assets[static_cast<std::size_t>(i)];
            res.short_asset = panel.assets[static_cast<std::size_t>(j)];
            const auto beta = hedge_ratio_series(cov, i, j);
            const auto weight = bilateral_weight_series(cov, i, j);
            res.ratio_stats = summarize(beta);
            res.weight_stats = summarize(weight);

            const auto hedged = hedged_returns(panel, cov.dates, beta, i, j);
            const auto paired = paired_portfolio_returns(panel, cov.dates, weight, i, j);
            const auto ref_rows = panel_rows_for(panel, hedged.dates);
            std::vector<double> ref;
            ref.reserve(ref_rows.size());
            for (auto r : ref_rows) ref.push_back(panel.returns(r, i));
            res.he_hedged = hedging_effectiveness(hedged.values, ref);
            res.he_paired = hedging_effectiveness(paired.values, ref);
            results[static_cast<std::size_t>(n)] = std::move(res);
        } catch (const std::exception& e) {
            failures[static_cast<std::size_t>(n)] = e.what();
        }
    }
    for (std::size_t n = 0; n < pairs.size(); ++n)
        if (!failures[n].empty())
            throw numeric_error("hedge pair " + panel.assets[static_cast<std::size_t>(pairs[n].first)] +
                                "/" + panel.assets[static_cast<std::size_t>(pairs[n].second)] +
                                ": " + failures[n]);
    return results;
}

}  // namespace spillover
