#include "spillover/report.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "spillover/errors.hpp"
#include "spillover/textio.hpp"

namespace fs = std::filesystem;

namespace spillover {

Bundle::Bundle(std::string dir, const RunConfig& config) : dir_(std::move(dir)), config_(config) {
    fs::create_directories(dir_);
    lock_path_ = (fs::path(dir_) / ".spillover.lock").string();
    const int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0)
        throw data_error("output directory '" + dir_ +
                         "' is locked by another run (remove " + lock_path_ + " if stale)");
    ::close(fd);

    const std::string toml = config.to_toml();
    echo_ = "config sha256=" + sha256_hex(toml).substr(0, 12) + " window=" +
            std::to_string(config.window) + " step=" + std::to_string(config.step) + " lag=" +
            std::to_string(config.lag) + " corr_method=" + corr_method_name(config.corr_method) +
            " estimator=" + config.estimator + " seed=" + std::to_string(config.seed);
}

Bundle::~Bundle() {
    std::error_code ec;
    fs::remove(lock_path_, ec);
}

void Bundle::write_text(const std::string& relpath, const std::string& content) {
    const fs::path full = fs::path(dir_) / relpath;
    fs::create_directories(full.parent_path());
    write_file(full.string(), content);
    artifacts_.emplace_back(relpath, sha256_hex(content));
}

void Bundle::abort() {
    if (aborted_) return;
    aborted_ = true;
    for (const auto& [rel, hash] : artifacts_) {
        std::error_code ec;
        fs::remove(fs::path(dir_) / rel, ec);
    }
    artifacts_.clear();
}

void Bundle::write_manifest() {
    std::ostringstream out;
    out << "{\n  \"artifacts\": [\n";
    for (std::size_t i = 0; i < artifacts_.size(); ++i) {
        out << "    {\"path\": \"" << artifacts_[i].first << "\", \"sha256\": \""
            << artifacts_[i].second << "\"}";
        out << (i + 1 < artifacts_.size() ? ",\n" : "\n");
    }
    out << "  ],\n  \"config\": " << config_.to_json() << "\n}\n";
    write_file((fs::path(dir_) / "manifest.json").string(), out.str());
}

namespace {

std::string echo_line(const std::string& echo) { return "# " + echo + "\n"; }

}  // namespace

std::string table1_csv(const std::vector<StatsRecord>& records, const std::string& echo) {
    std::string out = echo_line(echo);
    out += csv_line({"asset", "mean_x100", "variance_x100", "skewness", "ex_kurtosis", "jb", "ers"});
    for (const auto& r : records) {
        std::string jb = fmt6(r.jb.stat);
        if (r.jb.pvalue < 0.01)
            jb += "***";
        else if (r.jb.pvalue < 0.05)
            jb += "**";
        else if (r.jb.pvalue < 0.10)
            jb += "*";
        std::string ers = fmt6(r.ers.stat);
        ers += significance_stars(r.ers.band);
        out += csv_line({r.asset, fmt6(100.0 * r.moments.mean), fmt6(100.0 * r.moments.variance),
                         fmt6(r.moments.skewness), fmt6(r.moments.excess_kurtosis), jb, ers});
    }
    return out;
}

std::string correlation_csv(const CorrMatrix& corr, const std::string& echo) {
    std::string out = echo_line(echo);
    out += csv_line({"asset_i", "asset_j", "coefficient", "pvalue", "insignificant"});
    const auto k = corr.values.rows();
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            if (i == j) continue;
            out += csv_line({corr.assets[static_cast<std::size_t>(i)],
                             corr.assets[static_cast<std::size_t>(j)], fmt6(corr.values(i, j)),
                             fmt6(corr.pvalues(i, j)), corr.insignificant(i, j) ? "1" : "0"});
        }
    return out;
}

std::string matrix_csv(const std::vector<std::string>& names, const Eigen::MatrixXd& m,
                       const std::string& echo) {
    std::string out = echo_line(echo);
    std::vector<std::string> header = {"asset"};
    header.insert(header.end(), names.begin(), names.end());
    out += csv_line(header);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<std::string> row = {names[static_cast<std::size_t>(i)]};
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(fmt6(m(i, j)));
        out += csv_line(row);
    }
    return out;
}

std::string averaged_indices_csv(const std::vector<std::string>& names,
                                 const DirectionalIndices& idx, const std::string& echo) {
    std::string out = echo_line(echo);
    out += csv_line({"asset", "to", "to_c", "to_l", "from", "from_c", "from_l", "net", "net_c",
                     "net_l"});
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto e = static_cast<Eigen::Index>(i);
        out += csv_line({names[i], fmt6(idx.to(e)), fmt6(idx.to_c(e)), fmt6(idx.to_l(e)),
                         fmt6(idx.from(e)), fmt6(idx.from_c(e)), fmt6(idx.from_l(e)),
                         fmt6(idx.net(e)), fmt6(idx.net_c(e)), fmt6(idx.net_l(e))});
    }
    return out;
}

std::string rolling_csv(const std::vector<WindowResult>& results,
                        const std::vector<std::string>& names, const std::string& echo) {
    std::string out = echo_line(echo);
    std::vector<std::string> header = {"date", "tci", "tci_c", "tci_l"};
    for (const auto& n : names) header.push_back("to_" + n);
    for (const auto& n : names) header.push_back("from_" + n);
    for (const auto& n : names) header.push_back("net_" + n);
    out += csv_line(header);
    for (const auto& r : results) {
        std::vector<std::string> row = {r.end_date.to_string()};
        if (r.gap()) {
            for (std::size_t c = 1; c < header.size(); ++c) row.push_back("NA");
        } else {
            const auto& idx = *r.indices;
            row.push_back(fmt6(idx.tci));
            row.push_back(fmt6(idx.tci_c));
            row.push_back(fmt6(idx.tci_l));
            for (Eigen::Index i = 0; i < idx.to.size(); ++i) row.push_back(fmt6(idx.to(i)));
            for (Eigen::Index i = 0; i < idx.from.size(); ++i) row.push_back(fmt6(idx.from(i)));
            for (Eigen::Index i = 0; i < idx.net.size(); ++i) row.push_back(fmt6(idx.net(i)));
        }
        out += csv_line(row);
    }
    return out;
}

std::string npdc_long_csv(const std::vector<WindowResult>& results,
                          const std::vector<std::string>& names, const std::string& echo) {
    std::string out = echo_line(echo);
    out += csv_line({"date", "source", "target", "npdc"});
    for (const auto& r : results) {
        if (r.gap()) continue;
        const auto& npdc = r.indices->npdc;
        for (Eigen::Index i = 0; i < npdc.rows(); ++i)
            for (Eigen::Index j = 0; j < npdc.cols(); ++j) {
                if (i == j) continue;
                out += csv_line({r.end_date.to_string(), names[static_cast<std::size_t>(i)],
                                 names[static_cast<std::size_t>(j)], fmt6(npdc(i, j))});
            }
    }
    return out;
}

std::string covariance_csv(const ConditionalCovariances& cov, const std::string& echo) {
    std::string out = echo_line(echo);
    out += csv_line({"date", "asset_i", "asset_j", "sigma"});
    for (std::size_t t = 0; t < cov.sigmas.size(); ++t) {
        const auto& s = cov.sigmas[t];
        for (Eigen::Index i = 0; i < s.rows(); ++i)
            for (Eigen::Index j = i; j < s.cols(); ++j)
                out += csv_line({cov.dates[t].to_string(), cov.assets[static_cast<std::size_t>(i)],
                                 cov.assets[static_cast<std::size_t>(j)], fmt6(s(i, j))});
    }
    return out;
}

std::string hedge_table_csv(const std::vector<HedgePairResult>& pairs, bool paired_variant,
                            const std::string& echo) {
    std::string out = echo_line(echo);
    out += csv_line({"pair", "mean", "std_dev", "q05", "q95", "he", "pvalue"});
    for (const auto& p : pairs) {
        const SeriesSummary& s = paired_variant ? p.weight_stats : p.ratio_stats;
        const HedgingEffectiveness& he = paired_variant ? p.he_paired : p.he_hedged;
        out += csv_line({p.long_asset + "/" + p.short_asset, fmt6(s.mean), fmt6(s.stddev),
                         fmt6(s.q05), fmt6(s.q95), fmt6(he.he), fmt6(he.pvalue)});
    }
    return out;
}

std::string table3_csv(const std::vector<StrategyRun>& runs,
                       const std::vector<std::vector<AssetHedging>>& he,
                       const std::vector<std::string>& names, const std::string& echo) {
    std::string out = echo_line(echo);
    out += csv_line({"strategy", "asset", "mean", "std_dev", "q05", "q95", "he", "pvalue"});
    for (std::size_t s = 0; s < runs.size(); ++s) {
        for (std::size_t a = 0; a < names.size(); ++a) {
            const auto col = runs[s].weights.col(static_cast<Eigen::Index>(a));
            std::vector<double> w(col.begin(), col.end());
            const auto stats = summarize(w);
            out += csv_line({strategy_name(runs[s].strategy), names[a], fmt6(stats.mean),
                             fmt6(stats.stddev), fmt6(stats.q05), fmt6(stats.q95),
                             fmt6(he[s][a].he.he), fmt6(he[s][a].he.pvalue)});
        }
    }
    return out;
}

std::string table4_csv(const std::vector<StrategyRun>& runs,
                       const std::vector<PerformanceReport>& reports, const std::string& echo) {
    std::string out = echo_line(echo);
    std::vector<std::string> header = {"metric"};
    for (const auto& r : runs) header.push_back(strategy_name(r.strategy));
    out += csv_line(header);
    auto row = [&](const std::string& label, auto getter) {
        std::vector<std::string> fields = {label};
        for (const auto& rep : reports) fields.push_back(fmt6(getter(rep)));
        out += csv_line(fields);
    };
    row("return", [](const PerformanceReport& r) { return r.mean_return; });
    row("std_dev", [](const PerformanceReport& r) { return r.stddev; });
    row("sharpe_std", [](const PerformanceReport& r) { return r.sharpe_std; });
    row("sharpe_var", [](const PerformanceReport& r) { return r.sharpe_var; });
    row("sharpe_cvar", [](const PerformanceReport& r) { return r.sharpe_cvar; });
    return out;
}

std::string cumulative_csv(const std::vector<StrategyRun>& runs,
                           const std::vector<PerformanceReport>& reports,
                           const std::string& echo) {
    std::string out = echo_line(echo);
    std::vector<std::string> header = {"date"};
    for (const auto& r : runs) header.push_back(strategy_name(r.strategy));
    out += csv_line(header);
    if (runs.empty()) return out;
    // Strategies must already be trimmed to a common return calendar;
    // the first row is the zero starting point at the first weight date.
    const auto& dates = runs[0].return_dates;
    for (const auto& r : runs)
        if (r.return_dates != dates)
            throw data_error("cumulative_csv: strategies not on a common calendar");
    std::vector<std::string> first = {runs[0].weight_dates.front().to_string()};
    for (std::size_t s = 0; s < runs.size(); ++s) first.push_back("0");
    out += csv_line(first);
    for (std::size_t t = 0; t < dates.size(); ++t) {
        std::vector<std::string> row = {dates[t].to_string()};
        for (std::size_t s = 0; s < runs.size(); ++s)
            row.push_back(fmt6(reports[s].cumulative[t + 1]));
        out += csv_line(row);
    }
    return out;
}

}  // namespace spillover
