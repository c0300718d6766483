// Command-line front end: stats, connectedness, covariance, hedge,
// portfolio, run (full pipeline) and simulate (synthetic fixtures).
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "spillover/config.hpp"
#include "spillover/errors.hpp"
#include "spillover/pipeline.hpp"
#include "spillover/simulate.hpp"
#include "spillover/textio.hpp"

namespace {

using namespace spillover;

struct CliOptions {
    std::string config_path;
    std::vector<std::string> inputs;
    std::string output_dir;
    std::string date_column;
    std::string align;
    int window = 0;
    int step = 0;
    int lag = 0;
    std::string corr_method;
    bool include_own_lag = false;
    double threshold = std::nan("");
    std::string estimator;
    double lambda = std::nan("");
    int burn_in = 0;
    std::vector<std::string> strategies;
    double alpha = std::nan("");
    bool long_only = true;
    bool annualize = true;
    int ers_lag = -2;
};

// Flags override config keys which override defaults.
RunConfig effective_config(const CliOptions& opt, const CLI::App& cmd) {
    RunConfig cfg = opt.config_path.empty() ? validate_config("")
                                            : load_config_file(opt.config_path);
    auto given = [&](const std::string& flag) {
        const auto* option = cmd.get_option_no_throw(flag);
        return option != nullptr && option->count() > 0;
    };
    if (given("--input")) cfg.inputs = opt.inputs;
    if (given("--output")) cfg.output_dir = opt.output_dir;
    if (given("--date-column")) cfg.date_column = opt.date_column;
    if (given("--align")) cfg.align = align_policy_from_name(opt.align);
    if (given("--window")) cfg.window = opt.window;
    if (given("--step")) cfg.step = opt.step;
    if (given("--lag")) cfg.lag = opt.lag;
    if (given("--corr-method")) cfg.corr_method = corr_method_from_name(opt.corr_method);
    if (given("--include-own-lag")) cfg.include_own_lag = opt.include_own_lag;
    if (given("--threshold")) cfg.network_threshold = opt.threshold;
    if (given("--estimator")) cfg.estimator = opt.estimator;
    if (given("--lambda")) cfg.ewma_lambda = opt.lambda;
    if (given("--burn-in")) cfg.ewma_burn_in = opt.burn_in;
    if (given("--strategies")) {
        cfg.strategies.clear();
        for (const auto& s : opt.strategies) cfg.strategies.push_back(strategy_from_name(s));
    }
    if (given("--alpha")) cfg.alpha = opt.alpha;
    if (given("--long-only") || given("--no-long-only")) cfg.long_only = opt.long_only;
    if (given("--annualize") || given("--no-annualize")) cfg.annualize = opt.annualize;
    if (given("--ers-lag")) cfg.ers_lag = opt.ers_lag;

    // Re-validate the merged document so flag values obey the same ranges.
    return validate_config(cfg.to_toml());
}

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path, "TOML configuration file");
    cmd->add_option("--input", opt.inputs, "price CSV (repeatable)");
    cmd->add_option("--output", opt.output_dir, "output directory");
    cmd->add_option("--date-column", opt.date_column, "date column name");
    cmd->add_option("--align", opt.align, "intersection | union-forward-fill");
}

void add_connectedness_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--window", opt.window, "rolling window length");
    cmd->add_option("--step", opt.step, "window advance");
    cmd->add_option("--lag", opt.lag, "lag order of the decomposition");
    cmd->add_option("--corr-method", opt.corr_method, "pearson | spearman | kendall");
    cmd->add_flag("--include-own-lag", opt.include_own_lag,
                  "count own-lag shares inside the TCI");
    cmd->add_option("--threshold", opt.threshold, "network edge filter");
}

int run_guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// Single-stage wrapper: own bundle, partial outputs removed on failure.
template <typename Fn>
void run_stage(const RunConfig& cfg, Fn&& fn) {
    Bundle bundle(cfg.output_dir, cfg);
    try {
        fn(bundle);
    } catch (...) {
        bundle.abort();
        throw;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Connectedness, hedging and portfolio analytics for return panels"};
    app.require_subcommand(1);

    CliOptions opt;

    auto* stats_cmd = app.add_subcommand("stats", "descriptive statistics and correlations");
    add_common_options(stats_cmd, opt);
    stats_cmd->add_option("--corr-method", opt.corr_method, "pearson | spearman | kendall");
    stats_cmd->add_option("--ers-lag", opt.ers_lag, "ADF lag order (-1 = Schwert rule)");

    auto* conn_cmd = app.add_subcommand("connectedness", "spillover decomposition and networks");
    add_common_options(conn_cmd, opt);
    add_connectedness_options(conn_cmd, opt);

    auto* cov_cmd = app.add_subcommand("covariance", "conditional covariance estimation");
    add_common_options(cov_cmd, opt);
    cov_cmd->add_option("--estimator", opt.estimator, "ewma | dcc");
    cov_cmd->add_option("--lambda", opt.lambda, "EWMA decay");
    cov_cmd->add_option("--burn-in", opt.burn_in, "EWMA burn-in rows");

    auto* hedge_cmd = app.add_subcommand("hedge", "bilateral hedge ratios and effectiveness");
    add_common_options(hedge_cmd, opt);
    hedge_cmd->add_option("--estimator", opt.estimator, "ewma | dcc");
    hedge_cmd->add_option("--lambda", opt.lambda, "EWMA decay");
    hedge_cmd->add_option("--burn-in", opt.burn_in, "EWMA burn-in rows");

    auto* port_cmd = app.add_subcommand("portfolio", "multivariate strategies and performance");
    add_common_options(port_cmd, opt);
    add_connectedness_options(port_cmd, opt);
    port_cmd->add_option("--estimator", opt.estimator, "ewma | dcc");
    port_cmd->add_option("--lambda", opt.lambda, "EWMA decay");
    port_cmd->add_option("--burn-in", opt.burn_in, "EWMA burn-in rows");
    port_cmd->add_option("--strategies", opt.strategies, "subset of mvp,mcp,mcop,mcop_c,mcop_l")
        ->delimiter(',');
    port_cmd->add_option("--alpha", opt.alpha, "tail level for VaR/CVaR");
    port_cmd->add_flag("--long-only,!--no-long-only", opt.long_only, "clip negative weights");
    port_cmd->add_flag("--annualize,!--no-annualize", opt.annualize, "annualize by 252");

    auto* run_cmd = app.add_subcommand("run", "full pipeline with manifest");
    add_common_options(run_cmd, opt);
    add_connectedness_options(run_cmd, opt);
    run_cmd->add_option("--estimator", opt.estimator, "ewma | dcc");
    run_cmd->add_option("--lambda", opt.lambda, "EWMA decay");
    run_cmd->add_option("--burn-in", opt.burn_in, "EWMA burn-in rows");
    run_cmd->add_option("--strategies", opt.strategies, "subset of mvp,mcp,mcop,mcop_c,mcop_l")
        ->delimiter(',');
    run_cmd->add_option("--alpha", opt.alpha, "tail level for VaR/CVaR");
    run_cmd->add_flag("--long-only,!--no-long-only", opt.long_only, "clip negative weights");
    run_cmd->add_flag("--annualize,!--no-annualize", opt.annualize, "annualize by 252");
    run_cmd->add_option("--ers-lag", opt.ers_lag, "ADF lag order (-1 = Schwert rule)");

    std::string sim_out = "prices.csv";
    std::string sim_kind = "demo";
    std::uint64_t sim_seed = 42;
    int sim_rows = 1001;
    auto* sim_cmd = app.add_subcommand("simulate", "emit seeded synthetic price fixtures");
    sim_cmd->add_option("--out", sim_out, "output CSV path");
    sim_cmd->add_option("--kind", sim_kind, "demo | planted");
    sim_cmd->add_option("--seed", sim_seed, "random seed");
    sim_cmd->add_option("--rows", sim_rows, "price rows");

    CLI11_PARSE(app, argc, argv);

    return run_guarded([&] {
        if (sim_cmd->parsed()) {
            PricePanel panel;
            if (sim_kind == "demo") {
                panel = simulate_demo_prices(sim_seed, sim_rows);
            } else if (sim_kind == "planted") {
                const ReturnPanel rp = simulate_planted_var1(sim_seed, sim_rows - 1);
                panel.assets = rp.assets;
                panel.dates.push_back(Date::from_ymd(2021, 5, 24));
                for (const auto& d : rp.dates) panel.dates.push_back(d);
                panel.prices.resize(rp.rows() + 1, rp.cols());
                for (Eigen::Index k = 0; k < rp.cols(); ++k) {
                    double level = 100.0;
                    panel.prices(0, k) = level;
                    for (Eigen::Index t = 0; t < rp.rows(); ++t) {
                        level *= std::exp(rp.returns(t, k));
                        panel.prices(t + 1, k) = level;
                    }
                }
            } else {
                throw config_error("unknown fixture kind '" + sim_kind + "'");
            }
            write_file(sim_out, price_csv(panel));
            std::cout << "wrote " << sim_out << " (" << panel.rows() << " rows, "
                      << panel.cols() << " assets)\n";
            return;
        }

        if (stats_cmd->parsed()) {
            const RunConfig cfg = effective_config(opt, *stats_cmd);
            const ReturnPanel panel = load_inputs(cfg);
            run_stage(cfg, [&](Bundle& b) { stage_stats(panel, cfg, b); });
        } else if (conn_cmd->parsed()) {
            const RunConfig cfg = effective_config(opt, *conn_cmd);
            const ReturnPanel panel = load_inputs(cfg);
            run_stage(cfg, [&](Bundle& b) { stage_connectedness(panel, cfg, b); });
        } else if (cov_cmd->parsed()) {
            const RunConfig cfg = effective_config(opt, *cov_cmd);
            const ReturnPanel panel = load_inputs(cfg);
            run_stage(cfg, [&](Bundle& b) { stage_covariance(panel, cfg, b); });
        } else if (hedge_cmd->parsed()) {
            const RunConfig cfg = effective_config(opt, *hedge_cmd);
            const ReturnPanel panel = load_inputs(cfg);
            run_stage(cfg, [&](Bundle& b) {
                const auto cov = stage_covariance(panel, cfg, b);
                stage_hedge(panel, cov, cfg, b);
            });
        } else if (port_cmd->parsed()) {
            const RunConfig cfg = effective_config(opt, *port_cmd);
            const ReturnPanel panel = load_inputs(cfg);
            run_stage(cfg, [&](Bundle& b) {
                const auto cov = stage_covariance(panel, cfg, b);
                bool needs_rolling = false;
                for (auto s : cfg.strategies)
                    if (s == Strategy::mcop || s == Strategy::mcop_c || s == Strategy::mcop_l)
                        needs_rolling = true;
                std::vector<WindowResult> rolling;
                if (needs_rolling) {
                    RollingConfig rc;
                    rc.window = cfg.window;
                    rc.step = cfg.step;
                    rc.decompose.lag_order = cfg.lag;
                    rc.decompose.method = cfg.corr_method;
                    rc.include_own_lag_in_tci = cfg.include_own_lag;
                    rolling = rolling_connectedness(panel, rc);
                }
                stage_portfolio(panel, cov, rolling, cfg, b);
            });
        } else if (run_cmd->parsed()) {
            const RunConfig cfg = effective_config(opt, *run_cmd);
            run_pipeline(cfg);
            std::cout << "bundle written to " << cfg.output_dir << "\n";
        }
    });
}
