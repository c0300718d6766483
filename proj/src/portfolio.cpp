#include "spillover/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "spillover/errors.hpp"
#include "spillover/linalg.hpp"
#include "spillover/series_stats.hpp"

namespace spillover {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::mvp: return "mvp";
        case Strategy::mcp: return "mcp";
        case Strategy::mcop: return "mcop";
        case Strategy::mcop_c: return "mcop_c";
        case Strategy::mcop_l: return "mcop_l";
    }
    return "?";
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "mvp") return Strategy::mvp;
    if (name == "mcp") return Strategy::mcp;
    if (name == "mcop") return Strategy::mcop;
    if (name == "mcop_c") return Strategy::mcop_c;
    if (name == "mcop_l") return Strategy::mcop_l;
    throw config_error("unknown strategy '" + name +
                       "' (expected mvp, mcp, mcop, mcop_c or mcop_l)");
}

namespace {

Eigen::VectorXd inverse_ones_weights(const Eigen::MatrixXd& mat, bool long_only) {
    const Eigen::Index k = mat.rows();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k);
    Eigen::VectorXd x;
    try {
        x = solve_spd(mat, ones);
    } catch (const numeric_error&) {
        const Eigen::MatrixXd guarded =
            mat + 1e-10 * Eigen::MatrixXd::Identity(k, k);
        x = solve_spd(guarded, ones);  // throws "singular after guard" below on failure
    }
    const double total = x.sum();
    if (total == 0.0) throw numeric_error("weight normalization: zero total");
    Eigen::VectorXd w = x / total;
    if (long_only && (w.array() < 0.0).any()) {
        w = w.cwiseMax(0.0);
        const double pos = w.sum();
        if (pos == 0.0) throw numeric_error("long-only clipping removed every weight");
        w /= pos;
    }
    return w;
}

}  // namespace

Eigen::VectorXd mvp_weights(const Eigen::MatrixXd& sigma, bool long_only) {
    if (sigma.rows() != sigma.cols()) throw data_error("mvp_weights: matrix not square");
    try {
        return inverse_ones_weights(sigma, long_only);
    } catch (const numeric_error& e) {
        throw numeric_error(std::string("mvp_weights: singular after guard (") + e.what() + ")");
    }
}

Eigen::VectorXd mcp_weights(const Eigen::MatrixXd& sigma, bool long_only) {
    if (sigma.rows() != sigma.cols()) throw data_error("mcp_weights: matrix not square");
    const Eigen::Index k = sigma.rows();
    Eigen::VectorXd d = sigma.diagonal();
    for (Eigen::Index i = 0; i < k; ++i)
        if (!(d(i) > 0.0)) throw numeric_error("mcp_weights: non-positive variance");
    Eigen::VectorXd droot = d.cwiseSqrt();
    Eigen::MatrixXd corr(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        corr(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < k; ++j) {
            const double v = sigma(i, j) / (droot(i) * droot(j));
            corr(i, j) = v;
            corr(j, i) = v;
        }
    }
    try {
        return inverse_ones_weights(corr, long_only);
    } catch (const numeric_error& e) {
        throw numeric_error(std::string("mcp_weights: singular after guard (") + e.what() + ")");
    }
}

Eigen::VectorXd mcop_weights(const Eigen::MatrixXd& pci, bool long_only) {
    if (pci.rows() != pci.cols()) throw data_error("mcop_weights: matrix not square");
    try {
        return inverse_ones_weights(pci, long_only);
    } catch (const numeric_error& e) {
        throw numeric_error(std::string("mcop_weights: singular PCI after guard (") + e.what() +
                            ")");
    }
}

StrategyRun run_strategy(const ReturnPanel& panel, const MatrixSequence& seq,
                         Strategy strategy, bool long_only) {
    if (seq.dates.size() != seq.matrices.size())
        throw data_error("run_strategy: date/matrix count mismatch");
    if (seq.dates.empty()) throw data_error("run_strategy: empty matrix sequence");

    auto weights_for = [&](const Eigen::MatrixXd& m) {
        switch (strategy) {
            case Strategy::mvp: return mvp_weights(m, long_only);
            case Strategy::mcp: return mcp_weights(m, long_only);
            default: return mcop_weights(m, long_only);
        }
    };

    StrategyRun run;
    run.strategy = strategy;
    const Eigen::Index k = panel.cols();
    run.weights.resize(static_cast<Eigen::Index>(seq.dates.size()), k);
    Eigen::VectorXd current;
    for (std::size_t t = 0; t < seq.dates.size(); ++t) {
        try {
            current = weights_for(seq.matrices[t]);
        } catch (const numeric_error&) {
            if (current.size() == 0) throw;  // no earlier weights to carry forward
        }
        run.weight_dates.push_back(seq.dates[t]);
        run.weights.row(static_cast<Eigen::Index>(t)) = current.transpose();
    }

    // Realized returns: panel dates strictly after a weight date use the
    // most recent weights before them.
    std::map<int, std::size_t> weight_at;
    for (std::size_t t = 0; t < run.weight_dates.size(); ++t)
        weight_at[run.weight_dates[t].serial()] = t;
    const int first_weight = run.weight_dates.front().serial();
    std::size_t active = 0;
    bool have_active = false;
    for (std::size_t r = 0; r < panel.dates.size(); ++r) {
        const int d = panel.dates[r].serial();
        if (d > first_weight && have_active) {
            const Eigen::VectorXd w =
                run.weights.row(static_cast<Eigen::Index>(active)).transpose();
            run.return_dates.push_back(panel.dates[r]);
            run.returns.push_back(
                w.dot(panel.returns.row(static_cast<Eigen::Index>(r)).transpose()));
        }
        auto it = weight_at.find(d);
        if (it != weight_at.end()) {
            active = it->second;
            have_active = true;
        }
    }
    if (run.returns.empty())
        throw data_error("run_strategy: no panel dates after the first weight date");
    return run;
}

PerformanceReport performance(std::span<const double> returns, double alpha, bool annualize) {
    if (returns.size() < 30) throw data_error("performance: need at least 30 observations");
    if (!(alpha > 0.0 && alpha < 0.5)) throw config_error("performance: alpha must be in (0,0.5)");

    PerformanceReport rep{};
    rep.alpha = alpha;
    rep.annualized = annualize;
    const double scale_mean = annualize ? 252.0 : 1.0;
    const double scale_sd = annualize ? std::sqrt(252.0) : 1.0;

    const double m = mean(returns);
    const auto [lo, hi] = std::minmax_element(returns.begin(), returns.end());
    const double sd = *lo == *hi ? 0.0 : sample_stddev(returns);
    rep.mean_return = scale_mean * m;
    rep.stddev = scale_sd * sd;
    rep.sharpe_std = sd == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                               : rep.mean_return / rep.stddev;

    const double q = quantile(returns, alpha);
    rep.var_alpha = -q;
    double tail_sum = 0.0;
    int tail_n = 0;
    for (double r : returns)
        if (r <= q) {
            tail_sum += r;
            ++tail_n;
        }
    rep.cvar_alpha = tail_n ? -tail_sum / tail_n : std::numeric_limits<double>::quiet_NaN();

    if (rep.var_alpha <= 0.0) {
        rep.sharpe_var = std::numeric_limits<double>::quiet_NaN();
        rep.sharpe_cvar = std::numeric_limits<double>::quiet_NaN();
    } else {
        rep.sharpe_var = rep.mean_return / (scale_sd * rep.var_alpha);
        rep.sharpe_cvar = rep.mean_return / (scale_sd * rep.cvar_alpha);
    }

    rep.cumulative.reserve(returns.size() + 1);
    rep.cumulative.push_back(0.0);
    double acc = 0.0;
    for (double r : returns) {
        acc += r;
        rep.cumulative.push_back(acc);
    }
    return rep;
}

std::vector<AssetHedging> portfolio_he(const StrategyRun& run, const ReturnPanel& panel) {
    std::map<int, Eigen::Index> row_of;
    for (std::size_t r = 0; r < panel.dates.size(); ++r)
        row_of[panel.dates[r].serial()] = static_cast<Eigen::Index>(r);
    std::vector<Eigen::Index> rows;
    rows.reserve(run.return_dates.size());
    for (const auto& d : run.return_dates) {
        auto it = row_of.find(d.serial());
        if (it == row_of.end())
            throw data_error("portfolio_he: " + d.to_string() + " not in panel");
        rows.push_back(it->second);
    }
    std::vector<AssetHedging> out;
    for (Eigen::Index k = 0; k < panel.cols(); ++k) {
        std::vector<double> asset;
        asset.reserve(rows.size());
        for (auto r : rows) asset.push_back(panel.returns(r, k));
        AssetHedging ah;
        ah.asset = panel.assets[static_cast<std::size_t>(k)];
        ah.he = hedging_effectiveness(run.returns, asset);
        out.push_back(std::move(ah));
    }
    return out;
}

}  // namespace spillover
