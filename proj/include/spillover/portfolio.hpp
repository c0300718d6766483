#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "spillover/condcov.hpp"
#include "spillover/hedge.hpp"
#include "spillover/panel.hpp"

namespace spillover {

enum class Strategy { mvp, mcp, mcop, mcop_c, mcop_l };

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

/// Minimum-variance weights w = Sigma^{-1} 1 / (1' Sigma^{-1} 1). A ridge
/// of 1e-10 is added once if the solve fails; long_only clips negative
/// weights to zero and renormalizes in a single pass.
Eigen::VectorXd mvp_weights(const Eigen::MatrixXd& sigma, bool long_only = true);

/// Same objective on the correlation matrix implied by sigma.
Eigen::VectorXd mcp_weights(const Eigen::MatrixXd& sigma, bool long_only = true);

/// Same objective on a pairwise connectedness matrix (unit diagonal,
/// entries in (0,1]).
Eigen::VectorXd mcop_weights(const Eigen::MatrixXd& pci, bool long_only = true);

/// Weight path of one strategy plus the realized returns it produced.
/// Weights at date t come from that date's input matrix; the return at
/// date t uses the weights of the previous available date (no lookahead),
/// so the first matrix date produces no return.
struct StrategyRun {
    Strategy strategy;
    std::vector<Date> weight_dates;
    Eigen::MatrixXd weights;          // one row per weight date
    std::vector<Date> return_dates;
    std::vector<double> returns;
};

/// Matrix sequence driving a strategy: conditional covariances for
/// MVP/MCP, rolling PCI matrices for the MCoP family.
struct MatrixSequence {
    std::vector<Date> dates;
    std::vector<Eigen::MatrixXd> matrices;
};

StrategyRun run_strategy(const ReturnPanel& panel, const MatrixSequence& seq,
                         Strategy strategy, bool long_only = true);

/// Annualized performance metrics plus tail-risk Sharpe variants. The tail
/// ratios are NaN when the empirical VaR is not positive.
struct PerformanceReport {
    double mean_return;   // annualized when annualize=true
    double stddev;
    double sharpe_std;
    double var_alpha;     // positive loss quantile, per-period units
    double cvar_alpha;
    double sharpe_var;
    double sharpe_cvar;
    double alpha;
    bool annualized;
    std::vector<double> cumulative;  // running sum of returns, starts at 0
};

PerformanceReport performance(std::span<const double> returns, double alpha = 0.05,
                              bool annualize = true);

struct AssetHedging {
    std::string asset;
    HedgingEffectiveness he;
};

/// Per-asset risk reduction of a strategy's realized returns.
std::vector<AssetHedging> portfolio_he(const StrategyRun& run, const ReturnPanel& panel);

}  // namespace spillover
