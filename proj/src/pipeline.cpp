#include "spillover/pipeline.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "spillover/errors.hpp"
#include "spillover/network.hpp"
#include "spillover/svg.hpp"
#include "spillover/textio.hpp"

namespace spillover {

namespace {

using nlohmann::json;

void write_stage_metadata(Bundle& bundle, const RunConfig& config, const std::string& stage,
                          json extra) {
    json j;
    j["stage"] = stage;
    j["config"] = json::parse(config.to_json());
    j["details"] = std::move(extra);
    bundle.write_text(stage + "_metadata.json", j.dump(2) + "\n");
}

}  // namespace

ReturnPanel load_inputs(const RunConfig& config) {
    if (config.inputs.empty()) throw config_error("no input files configured");
    CsvSchema schema;
    schema.date_column = config.date_column;
    std::vector<PricePanel> panels;
    panels.reserve(config.inputs.size());
    for (const auto& path : config.inputs) panels.push_back(load_price_csv(path, schema));
    PricePanel joined =
        panels.size() == 1 ? std::move(panels.front()) : align_panels(panels, config.align);
    if (joined.cols() < 2) throw data_error("need at least 2 assets across inputs");
    return log_returns(joined);
}

void stage_stats(const ReturnPanel& panel, const RunConfig& config, Bundle& bundle) {
    const auto records = describe_panel(panel, config.ers_lag);
    bundle.write_text("table1.csv", table1_csv(records, bundle.config_echo()));

    const auto corr = correlation_matrix(panel, config.corr_method, config.mask_level);
    bundle.write_text("correlation.csv", correlation_csv(corr, bundle.config_echo()));

    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask(corr.values.rows(),
                                                             corr.values.cols());
    for (Eigen::Index i = 0; i < corr.values.rows(); ++i)
        for (Eigen::Index j = 0; j < corr.values.cols(); ++j)
            mask(i, j) = corr.insignificant(i, j);
    bundle.write_text(
        "correlation_heatmap.svg",
        svg_heatmap("Pairwise correlations (" + std::string(corr_method_name(corr.method)) + ")",
                    panel.assets, corr.values, -1.0, 1.0, &mask, bundle.config_echo()));

    json extra;
    extra["assets"] = panel.assets;
    extra["observations"] = panel.rows();
    extra["moment_convention"] = "skewness and kurtosis from 1/n central moments";
    extra["ers"] = {{"variant", "DF-GLS constant-only, cbar=-7"},
                    {"critical_values", {-2.58, -1.95, -1.62}},
                    {"lag_rule", config.ers_lag < 0 ? "schwert" : "fixed"}};
    write_stage_metadata(bundle, config, "stats", std::move(extra));
}

std::vector<WindowResult> stage_connectedness(const ReturnPanel& panel, const RunConfig& config,
                                              Bundle& bundle) {
    RollingConfig rolling_cfg;
    rolling_cfg.window = config.window;
    rolling_cfg.step = config.step;
    rolling_cfg.decompose.lag_order = config.lag;
    rolling_cfg.decompose.method = config.corr_method;
    rolling_cfg.include_own_lag_in_tci = config.include_own_lag;

    const auto results = rolling_connectedness(panel, rolling_cfg);
    const auto avg = averaged_spillover(results, config.include_own_lag);

    const auto& echo = bundle.config_echo();
    const Eigen::MatrixXd overall = avg.spill.contemporaneous + avg.spill.lagged;
    bundle.write_text("averaged_overall.csv", matrix_csv(panel.assets, overall, echo));
    bundle.write_text("averaged_contemporaneous.csv",
                      matrix_csv(panel.assets, avg.spill.contemporaneous, echo));
    bundle.write_text("averaged_lagged.csv", matrix_csv(panel.assets, avg.spill.lagged, echo));
    const double heat_hi = std::max(overall.maxCoeff(), 1.0);
    bundle.write_text("averaged_overall.svg",
                      svg_heatmap("Averaged spillovers (row receives from column)",
                                  panel.assets, overall, 0.0, heat_hi, nullptr, echo));
    bundle.write_text("averaged_contemporaneous.svg",
                      svg_heatmap("Averaged contemporaneous spillovers", panel.assets,
                                  avg.spill.contemporaneous, 0.0, heat_hi, nullptr, echo));
    bundle.write_text("averaged_lagged.svg",
                      svg_heatmap("Averaged lagged spillovers", panel.assets, avg.spill.lagged,
                                  0.0, heat_hi, nullptr, echo));
    bundle.write_text("averaged_indices.csv",
                      averaged_indices_csv(panel.assets, avg.indices, echo));
    bundle.write_text("rolling_indices.csv", rolling_csv(results, panel.assets, echo));
    bundle.write_text("npdc.csv", npdc_long_csv(results, panel.assets, echo));

    struct NetVariant {
        const char* name;
        const Eigen::MatrixXd& npdc;
        const Eigen::VectorXd& net;
    };
    const NetVariant variants[] = {
        {"overall", avg.indices.npdc, avg.indices.net},
        {"contemporaneous", avg.indices.npdc_c, avg.indices.net_c},
        {"lagged", avg.indices.npdc_l, avg.indices.net_l},
    };
    for (const auto& v : variants) {
        const auto graph =
            export_network(v.npdc, v.net, panel.assets, config.network_threshold);
        bundle.write_text("network_" + std::string(v.name) + ".dot", to_dot(graph, echo));
        bundle.write_text("network_" + std::string(v.name) + ".graphml", to_graphml(graph, echo));
    }

    // Line charts over the non-gap windows.
    std::vector<Date> chart_dates;
    std::vector<double> tci, tci_c, tci_l;
    std::vector<std::vector<double>> net_series(panel.assets.size());
    for (const auto& r : results) {
        if (r.gap()) continue;
        chart_dates.push_back(r.end_date);
        tci.push_back(r.indices->tci);
        tci_c.push_back(r.indices->tci_c);
        tci_l.push_back(r.indices->tci_l);
        for (std::size_t a = 0; a < panel.assets.size(); ++a)
            net_series[a].push_back(r.indices->net(static_cast<Eigen::Index>(a)));
    }
    if (chart_dates.size() >= 2) {
        bundle.write_text("tci.svg",
                          svg_line_chart("Total connectedness", chart_dates,
                                         {{"tci", tci}, {"tci_c", tci_c}, {"tci_l", tci_l}},
                                         echo));
        std::vector<ChartSeries> net_chart;
        for (std::size_t a = 0; a < panel.assets.size(); ++a)
            net_chart.push_back({"net_" + panel.assets[a], net_series[a]});
        bundle.write_text("net.svg",
                          svg_line_chart("Net directional connectedness", chart_dates, net_chart,
                                         echo));
    }

    json extra;
    extra["windows"] = results.size();
    extra["gaps"] = avg.gaps;
    extra["tci"] = avg.indices.tci;
    extra["tci_contemporaneous"] = avg.indices.tci_c;
    extra["tci_lagged"] = avg.indices.tci_l;
    extra["attribution"] = "orthogonal-transformation relative weights";
    extra["tci_own_lag_included"] = config.include_own_lag;
    extra["pci_normalization"] = 200.0;
    extra["pci_floor"] = 1e-6;
    write_stage_metadata(bundle, config, "connectedness", std::move(extra));
    return results;
}

ConditionalCovariances stage_covariance(const ReturnPanel& panel, const RunConfig& config,
                                        Bundle& bundle) {
    ConditionalCovariances cov;
    if (config.estimator == "ewma")
        cov = ewma_covariance(panel, config.ewma_lambda, config.ewma_burn_in);
    else
        cov = dcc_covariance(panel);
    cov.validate();

    bundle.write_text("covariance.csv", covariance_csv(cov, bundle.config_echo()));
    json extra;
    extra["estimator"] = cov.method;
    for (const auto& [key, value] : cov.params) extra["parameters"][key] = value;
    extra["warnings"] = cov.warnings;
    extra["matrices"] = cov.sigmas.size();
    write_stage_metadata(bundle, config, "covariance", std::move(extra));
    return cov;
}

void stage_hedge(const ReturnPanel& panel, const ConditionalCovariances& cov,
                 const RunConfig& config, Bundle& bundle) {
    const auto pairs = hedge_all_pairs(panel, cov);
    bundle.write_text("hedge_ratios.csv",
                      hedge_table_csv(pairs, /*paired_variant=*/false, bundle.config_echo()));
    bundle.write_text("bilateral_weights.csv",
                      hedge_table_csv(pairs, /*paired_variant=*/true, bundle.config_echo()));
    json extra;
    extra["pairs"] = pairs.size();
    extra["he_variants"] = {"hedge_ratios.csv: beta-hedged position",
                            "bilateral_weights.csv: two-asset portfolio"};
    extra["timing"] = "weights lagged one period in return construction";
    write_stage_metadata(bundle, config, "hedge", std::move(extra));
}

namespace {

// Restrict every strategy to the common suffix of return dates so that
// performance numbers are comparable across strategies.
void trim_to_common(std::vector<StrategyRun>& runs) {
    if (runs.empty()) return;
    Date latest_start = runs[0].return_dates.front();
    for (const auto& r : runs)
        latest_start = std::max(latest_start, r.return_dates.front());
    for (auto& r : runs) {
        std::size_t drop = 0;
        while (drop < r.return_dates.size() && r.return_dates[drop] < latest_start) ++drop;
        r.return_dates.erase(r.return_dates.begin(),
                             r.return_dates.begin() + static_cast<std::ptrdiff_t>(drop));
        r.returns.erase(r.returns.begin(), r.returns.begin() + static_cast<std::ptrdiff_t>(drop));
    }
    for (const auto& r : runs)
        if (r.return_dates != runs[0].return_dates)
            throw data_error("strategies disagree on the realized-return calendar");
}

}  // namespace

void stage_portfolio(const ReturnPanel& panel, const ConditionalCovariances& cov,
                     const std::vector<WindowResult>& rolling, const RunConfig& config,
                     Bundle& bundle) {
    MatrixSequence cov_seq;
    cov_seq.dates = cov.dates;
    cov_seq.matrices = cov.sigmas;

    auto pci_sequence = [&](PciVariant variant) {
        MatrixSequence seq;
        for (const auto& r : rolling) {
            if (r.gap()) continue;
            seq.dates.push_back(r.end_date);
            seq.matrices.push_back(pci_matrix(*r.spill, variant));
        }
        if (seq.dates.empty()) throw numeric_error("no usable rolling windows for MCoP");
        return seq;
    };

    std::vector<StrategyRun> runs;
    for (Strategy s : config.strategies) {
        switch (s) {
            case Strategy::mvp:
            case Strategy::mcp:
                runs.push_back(run_strategy(panel, cov_seq, s, config.long_only));
                break;
            case Strategy::mcop:
                runs.push_back(run_strategy(panel, pci_sequence(PciVariant::total), s,
                                            config.long_only));
                break;
            case Strategy::mcop_c:
                runs.push_back(run_strategy(panel, pci_sequence(PciVariant::contemporaneous), s,
                                            config.long_only));
                break;
            case Strategy::mcop_l:
                runs.push_back(run_strategy(panel, pci_sequence(PciVariant::lagged), s,
                                            config.long_only));
                break;
        }
    }
    trim_to_common(runs);

    std::vector<PerformanceReport> reports;
    std::vector<std::vector<AssetHedging>> he;
    for (const auto& run : runs) {
        reports.push_back(performance(run.returns, config.alpha, config.annualize));
        he.push_back(portfolio_he(run, panel));
    }

    const auto& echo = bundle.config_echo();
    bundle.write_text("table3.csv", table3_csv(runs, he, panel.assets, echo));
    bundle.write_text("table4.csv", table4_csv(runs, reports, echo));
    bundle.write_text("cumulative_returns.csv", cumulative_csv(runs, reports, echo));

    if (!runs.empty()) {
        std::vector<Date> dates = runs[0].return_dates;
        dates.insert(dates.begin(), runs[0].weight_dates.front());
        std::vector<ChartSeries> series;
        for (std::size_t s = 0; s < runs.size(); ++s)
            series.push_back({strategy_name(runs[s].strategy), reports[s].cumulative});
        bundle.write_text("cumulative_returns.svg",
                          svg_line_chart("Cumulative portfolio returns", dates, series, echo));
    }

    json extra;
    extra["strategies"] = json::array();
    for (std::size_t s = 0; s < runs.size(); ++s)
        extra["strategies"].push_back({{"name", strategy_name(runs[s].strategy)},
                                       {"return_observations", runs[s].returns.size()}});
    extra["long_only"] = config.long_only;
    extra["annualize"] = config.annualize;
    extra["annualization_factor"] = 252;
    extra["alpha"] = config.alpha;
    extra["weight_solver"] = "clip-and-renormalize for the long-only constraint";
    write_stage_metadata(bundle, config, "portfolio", std::move(extra));
}

void run_pipeline(const RunConfig& config) {
    Bundle bundle(config.output_dir, config);
    std::string stage = "ingest";
    try {
        const ReturnPanel panel = load_inputs(config);
        stage = "stats";
        stage_stats(panel, config, bundle);
        stage = "connectedness";
        const auto rolling = stage_connectedness(panel, config, bundle);
        stage = "covariance";
        const auto cov = stage_covariance(panel, config, bundle);
        stage = "hedge";
        stage_hedge(panel, cov, config, bundle);
        stage = "portfolio";
        stage_portfolio(panel, cov, rolling, config, bundle);
        bundle.write_manifest();
    } catch (const config_error& e) {
        bundle.abort();
        throw config_error("stage " + stage + ": " + e.what());
    } catch (const data_error& e) {
        bundle.abort();
        throw data_error("stage " + stage + ": " + e.what());
    } catch (const numeric_error& e) {
        bundle.abort();
        throw numeric_error("stage " + stage + ": " + e.what());
    } catch (const std::exception& e) {
        bundle.abort();
        throw numeric_error("stage " + stage + ": " + e.what());
    }
}

}  // namespace spillover
