// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spillover/condcov.hpp"
#include "spillover/connectedness.hpp"
#include "spillover/hedge.hpp"
#include "spillover/pipeline.hpp"
#include "spillover/portfolio.hpp"
#include "spillover/relative_weights.hpp"
#include "spillover/rng.hpp"
#include "spillover/simulate.hpp"
#include "spillover/textio.hpp"
#include "test_support.hpp"

using namespace spillover;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------- 1 ----
void criterion1_attribution_oracle() {
    const auto start = std::chrono::steady_clock::now();
    double worst_gap = 0.0;
    double worst_negative = 0.0;
    for (int problem = 0; problem < 500; ++problem) {
        Rng rng(10000 + problem);
        const int regressors = 2 + problem % 16;  // up to 17
        Eigen::MatrixXd x = testsupport::random_matrix(rng, 250, regressors);
        for (int j = 1; j < regressors; ++j)
            x.col(j) += 0.4 * x.col(j - 1);  // realistic collinearity
        Eigen::VectorXd coef = testsupport::random_matrix(rng, regressors, 1).col(0);
        Eigen::VectorXd y =
            x * coef + 3.0 * testsupport::random_matrix(rng, 250, 1).col(0);

        const Eigen::VectorXd shares = relative_weights(x, y);
        worst_negative = std::min(worst_negative, shares.minCoeff());
        worst_gap = std::max(worst_gap,
                             std::abs(shares.sum() - testsupport::ols_r2(x, y)));
    }
    const double elapsed = seconds_since(start);
    const bool pass = worst_gap <= 1e-8 && worst_negative >= -1e-12 && elapsed < 30.0;
    std::ostringstream detail;
    detail << "max |sum(shares)-R2| = " << worst_gap << ", min share = " << worst_negative
           << ", " << elapsed << " s over 500 problems";
    report(1, "attribution matches the OLS R2 oracle", pass, detail.str());
}

// ---------------------------------------------------------------- 2 ----
void criterion2_rolling_identities() {
    const auto start = std::chrono::steady_clock::now();
    const auto panel = log_returns(simulate_demo_prices(42, 1001));
    RollingConfig cfg;  // window 200, step 1, lag 1, pearson
    const auto results = rolling_connectedness(panel, cfg);
    const double elapsed = seconds_since(start);

    std::size_t windows = 0;
    bool identities = true;
    double worst_net = 0.0;
    for (const auto& r : results) {
        if (r.gap()) {
            identities = false;
            continue;
        }
        ++windows;
        const auto& idx = *r.indices;
        if (idx.tci != idx.tci_c + idx.tci_l) identities = false;
        worst_net = std::max(worst_net, std::abs(idx.net.sum()));
        if ((idx.npdc + idx.npdc.transpose()).cwiseAbs().maxCoeff() != 0.0)
            identities = false;
        if (idx.from.minCoeff() < 0.0 || idx.from.maxCoeff() > 100.0) identities = false;
    }
    const bool pass =
        windows == 801 && identities && worst_net <= 1e-10 && elapsed < 60.0;
    std::ostringstream detail;
    detail << windows << " windows, max |sum NET| = " << worst_net << ", " << elapsed << " s";
    report(2, "rolling connectedness identities on the 9-asset fixture", pass, detail.str());
}

// ---------------------------------------------------------------- 3 ----
void criterion3_planted_structure() {
    int recovered = 0;
    for (int seed = 0; seed < 50; ++seed) {
        const auto panel = simulate_planted_var1(20000 + seed, 400);
        RollingConfig cfg;
        cfg.window = 200;
        cfg.step = 20;
        const auto rolling = rolling_connectedness(panel, cfg);
        const auto avg = averaged_spillover(rolling);
        if (avg.indices.net(0) > 0.0 && avg.indices.net(1) < 0.0 && avg.indices.net(2) < 0.0)
            ++recovered;
    }
    const bool pass = recovered >= 45;
    std::ostringstream detail;
    detail << recovered << "/50 seeds recover the transmitter/receiver roles";
    report(3, "planted VAR(1) transmitter recovery", pass, detail.str());
}

// ---------------------------------------------------------------- 4 ----
void criterion4_invariances() {
    const auto panel = log_returns(simulate_demo_prices(7, 301));
    DecomposeOptions opts;
    const auto base = decompose_window(panel.returns, panel.assets, opts);
    const auto base_idx = directional_indices(base);

    double scale_dev = 0.0;
    for (Eigen::Index col : {0, 4, 8}) {
        auto scaled = panel.returns;
        scaled.col(col) *= 3.0;
        const auto mod = decompose_window(scaled, panel.assets, opts);
        const auto mod_idx = directional_indices(mod);
        scale_dev = std::max(scale_dev,
                             (base.contemporaneous - mod.contemporaneous).cwiseAbs().maxCoeff());
        scale_dev = std::max(scale_dev, (base.lagged - mod.lagged).cwiseAbs().maxCoeff());
        scale_dev = std::max(scale_dev, std::abs(base_idx.tci - mod_idx.tci));
        scale_dev = std::max(scale_dev, (base_idx.net - mod_idx.net).cwiseAbs().maxCoeff());
    }

    const std::vector<int> perm = {3, 8, 1, 6, 0, 7, 2, 5, 4};
    Eigen::MatrixXd shuffled(panel.rows(), panel.cols());
    std::vector<std::string> shuffled_names;
    for (std::size_t c = 0; c < perm.size(); ++c) {
        shuffled.col(static_cast<Eigen::Index>(c)) = panel.returns.col(perm[c]);
        shuffled_names.push_back(panel.assets[static_cast<std::size_t>(perm[c])]);
    }
    const auto mod = decompose_window(shuffled, shuffled_names, opts);
    bool permutation_exact = true;
    for (std::size_t a = 0; a < perm.size(); ++a)
        for (std::size_t b = 0; b < perm.size(); ++b) {
            if (mod.contemporaneous(static_cast<Eigen::Index>(a),
                                    static_cast<Eigen::Index>(b)) !=
                base.contemporaneous(perm[a], perm[b]))
                permutation_exact = false;
            if (mod.lagged(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) !=
                base.lagged(perm[a], perm[b]))
                permutation_exact = false;
        }
    const auto mod_idx = directional_indices(mod);
    if (mod_idx.tci != base_idx.tci) permutation_exact = false;
    for (std::size_t a = 0; a < perm.size(); ++a)
        if (mod_idx.net(static_cast<Eigen::Index>(a)) != base_idx.net(perm[a]))
            permutation_exact = false;

    const bool pass = scale_dev <= 1e-9 && permutation_exact;
    std::ostringstream detail;
    detail << "max index change under x3 scaling = " << scale_dev << ", permutation "
           << (permutation_exact ? "exact" : "NOT exact");
    report(4, "scale and permutation invariance", pass, detail.str());
}

// ---------------------------------------------------------------- 5 ----
void criterion5_estimator_recovery() {
    const auto start = std::chrono::steady_clock::now();
    int garch_ok = 0;
    for (int seed = 0; seed < 50; ++seed) {
        const auto r = simulate_garch11(30000 + seed, 5000, 0.05, 0.08, 0.90);
        const auto fit = garch11_fit(r);
        if (std::abs(fit.alpha + fit.beta - 0.98) <= 0.05) ++garch_ok;
    }
    int dcc_ok = 0;
    for (int seed = 0; seed < 50; ++seed) {
        const auto panel = simulate_constant_correlation(40000 + seed, 700, 3, 0.5);
        const auto fit = dcc_fit_params(panel);
        if (fit.a <= 0.05) ++dcc_ok;
    }
    const double elapsed = seconds_since(start);
    const bool pass = garch_ok >= 40 && dcc_ok >= 40 && elapsed < 300.0;
    std::ostringstream detail;
    detail << "garch persistence recovered in " << garch_ok << "/50, dcc a<=0.05 in " << dcc_ok
           << "/50, " << elapsed << " s";
    report(5, "GARCH and DCC estimator recovery", pass, detail.str());
}

// ---------------------------------------------------------------- 6 ----
void criterion6_hedging_algebra() {
    Rng rng(50001);
    bool weights_in_range = true;
    for (int rep = 0; rep < 1000000; ++rep) {
        const double a = rng.normal(), b = rng.normal(), c = rng.normal(), d = rng.normal();
        // Sigma = G G' for a random 2x2 factor G
        const double s11 = a * a + b * b;
        const double s12 = a * c + b * d;
        const double s22 = c * c + d * d;
        const double denom = (s11 - s12) + (s22 - s12);
        if (!(denom > 0.0)) continue;  // degenerate factor, excluded by the PSD precondition
        const double raw = (s11 - s12) / denom;
        const double w = std::clamp(raw, 0.0, 1.0);
        if (!(w >= 0.0 && w <= 1.0)) weights_in_range = false;
    }

    Rng rng2(50002);
    std::vector<double> ri(200);
    for (auto& v : ri) v = 0.01 * rng2.normal();
    ReturnPanel twin;
    twin.assets = {"i", "j"};
    twin.returns.resize(200, 2);
    Date d0 = Date::from_ymd(2022, 1, 1);
    for (int t = 0; t < 200; ++t) {
        twin.returns(t, 0) = ri[static_cast<std::size_t>(t)];
        twin.returns(t, 1) = ri[static_cast<std::size_t>(t)];
        twin.dates.push_back(d0);
        d0 = d0.next_day();
    }
    std::vector<Date> series_dates(twin.dates.begin() + 1, twin.dates.end());
    const std::vector<double> unit_beta(series_dates.size(), 1.0);
    const auto hedged = hedged_returns(twin, series_dates, unit_beta, 0, 1);
    std::vector<double> ref;
    for (std::size_t t = 2; t < twin.dates.size(); ++t)
        ref.push_back(twin.returns(static_cast<Eigen::Index>(t), 0));
    const auto perfect = hedging_effectiveness(hedged.values, ref);
    const auto none = hedging_effectiveness(ref, ref);

    const bool pass = weights_in_range && perfect.he == 1.0 && none.he == 0.0;
    std::ostringstream detail;
    detail << "clamped weights in [0,1] on 1e6 PSD draws; perfect-hedge HE = " << perfect.he
           << ", self-hedge HE = " << none.he;
    report(6, "bilateral hedging algebra", pass, detail.str());
}

// ---------------------------------------------------------------- 7 ----
void criterion7_portfolio_optimality() {
    Rng rng(60001);
    bool optimal = true;
    double worst_excess = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
        const int k = 2 + rep % 8;
        const Eigen::MatrixXd sigma = testsupport::random_psd(rng, k);
        const Eigen::VectorXd w = mvp_weights(sigma, /*long_only=*/false);
        const double excess = w.dot(sigma * w) - sigma.diagonal().minCoeff();
        worst_excess = std::max(worst_excess, excess);
        if (excess > 1e-10) optimal = false;
    }

    bool corner_exact = true;
    {
        const auto w_id = mvp_weights(Eigen::MatrixXd::Identity(5, 5));
        Eigen::MatrixXd equi = Eigen::MatrixXd::Constant(5, 5, 0.5);
        equi.diagonal().setOnes();
        const auto w_eq = mvp_weights(equi);
        const auto w_mcp = mcp_weights(equi);
        const auto w_mcop = mcop_weights(equi);
        for (int i = 0; i < 5; ++i) {
            if (w_id(i) != w_id(0) || w_eq(i) != w_eq(0)) corner_exact = false;
            if (w_mcp(i) != w_mcp(0) || w_mcop(i) != w_mcop(0)) corner_exact = false;
        }
    }

    // Weight rows across a full pipeline pass on the fixture.
    const auto panel = log_returns(simulate_demo_prices(42, 501));
    const auto cov = ewma_covariance(panel, 0.94, 60);
    RollingConfig rc;
    rc.window = 200;
    rc.step = 5;
    const auto rolling = rolling_connectedness(panel, rc);
    MatrixSequence cov_seq{cov.dates, cov.sigmas};
    MatrixSequence pci_seq;
    for (const auto& r : rolling) {
        if (r.gap()) continue;
        pci_seq.dates.push_back(r.end_date);
        pci_seq.matrices.push_back(pci_matrix(*r.spill, PciVariant::total));
    }
    double worst_row_sum = 0.0;
    for (auto strat : {Strategy::mvp, Strategy::mcp, Strategy::mcop}) {
        const auto& seq = strat == Strategy::mcop ? pci_seq : cov_seq;
        const auto run = run_strategy(panel, seq, strat);
        for (Eigen::Index t = 0; t < run.weights.rows(); ++t)
            worst_row_sum =
                std::max(worst_row_sum, std::abs(run.weights.row(t).sum() - 1.0));
    }

    const bool pass = optimal && corner_exact && worst_row_sum <= 1e-12;
    std::ostringstream detail;
    detail << "max wSw excess over min variance = " << worst_excess
           << ", corner cases exact = " << (corner_exact ? "yes" : "no")
           << ", max |row sum - 1| = " << worst_row_sum;
    report(7, "portfolio optimality and corner cases", pass, detail.str());
}

// ---------------------------------------------------------------- 8 ----
std::vector<std::string> csv_header(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') break;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    return fields;
}

void criterion8_output_fidelity() {
    const fs::path dir = fs::temp_directory_path() / "spillover_acceptance_bundle";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path csv = dir / "prices.csv";
    write_file(csv.string(), price_csv(simulate_demo_prices(42, 601)));

    RunConfig cfg = validate_config("");
    cfg.inputs = {csv.string()};
    cfg.window = 200;
    cfg.step = 2;
    cfg.ers_lag = 4;
    cfg.output_dir = (dir / "out").string();
    run_pipeline(cfg);

    bool columns_ok = true;
    auto expect = [&](const std::string& file, const std::vector<std::string>& want) {
        const auto got = csv_header(cfg.output_dir + "/" + file);
        if (got != want) {
            columns_ok = false;
            std::cerr << "  column mismatch in " << file << "\n";
        }
    };
    expect("table1.csv",
           {"asset", "mean_x100", "variance_x100", "skewness", "ex_kurtosis", "jb", "ers"});
    expect("hedge_ratios.csv", {"pair", "mean", "std_dev", "q05", "q95", "he", "pvalue"});
    expect("bilateral_weights.csv", {"pair", "mean", "std_dev", "q05", "q95", "he", "pvalue"});
    expect("table3.csv",
           {"strategy", "asset", "mean", "std_dev", "q05", "q95", "he", "pvalue"});
    expect("table4.csv", {"metric", "mvp", "mcp", "mcop", "mcop_c", "mcop_l"});

    // Every DOT edge weight must clear the 0.05 filter.
    bool edges_ok = true;
    int edges_seen = 0;
    const std::regex weight_re("weight=([0-9.eE+-]+)");
    for (const char* net :
         {"network_overall.dot", "network_contemporaneous.dot", "network_lagged.dot"}) {
        const std::string dot = read_file(cfg.output_dir + "/" + net);
        for (std::sregex_iterator it(dot.begin(), dot.end(), weight_re), end; it != end; ++it) {
            ++edges_seen;
            if (std::stod((*it)[1]) <= 0.05) edges_ok = false;
        }
    }

    const std::string manifest = read_file(cfg.output_dir + "/manifest.json");
    std::map<std::string, std::string> before;
    for (const auto& entry : fs::directory_iterator(cfg.output_dir))
        before[entry.path().filename().string()] = read_file(entry.path().string());

    run_pipeline(cfg);
    bool rerun_identical = read_file(cfg.output_dir + "/manifest.json") == manifest;
    for (const auto& [name, bytes] : before)
        if (read_file(cfg.output_dir + "/" + name) != bytes) rerun_identical = false;

    const bool pass = columns_ok && edges_ok && rerun_identical;
    std::ostringstream detail;
    detail << "table shapes " << (columns_ok ? "match" : "MISMATCH") << ", " << edges_seen
           << " network edges all above 0.05: " << (edges_ok ? "yes" : "no")
           << ", rerun byte-identical: " << (rerun_identical ? "yes" : "no");
    report(8, "bundle fidelity and determinism", pass, detail.str());
    fs::remove_all(dir);
}

// ---------------------------------------------------------------- 9 ----
void criterion9_method_robustness() {
    const auto panel = log_returns(simulate_demo_prices(42, 1001));
    std::vector<std::vector<double>> tci_by_method;
    for (auto method : {CorrMethod::pearson, CorrMethod::spearman, CorrMethod::kendall}) {
        RollingConfig cfg;
        cfg.window = 200;
        cfg.step = 1;
        cfg.decompose.method = method;
        const auto results = rolling_connectedness(panel, cfg);
        std::vector<double> tci;
        for (const auto& r : results)
            if (!r.gap()) tci.push_back(r.indices->tci);
        tci_by_method.push_back(std::move(tci));
    }
    double min_corr = 1.0;
    for (std::size_t a = 0; a < tci_by_method.size(); ++a)
        for (std::size_t b = a + 1; b < tci_by_method.size(); ++b)
            min_corr = std::min(min_corr, pearson(tci_by_method[a], tci_by_method[b]));
    const bool pass = min_corr >= 0.8;
    std::ostringstream detail;
    detail << "minimum pairwise correlation of rolling TCIs = " << min_corr;
    report(9, "Pearson/Spearman/Kendall robustness", pass, detail.str());
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion1_attribution_oracle();
    criterion2_rolling_identities();
    criterion3_planted_structure();
    criterion4_invariances();
    criterion5_estimator_recovery();
    criterion6_hedging_algebra();
    criterion7_portfolio_optimality();
    criterion8_output_fidelity();
    criterion9_method_robustness();
    if (g_failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criterion(s) FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
