#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spillover/condcov.hpp"
#include "spillover/config.hpp"
#include "spillover/connectedness.hpp"
#include "spillover/descriptive.hpp"
#include "spillover/hedge.hpp"
#include "spillover/portfolio.hpp"

namespace spillover {

/// Exclusive owner of one output directory. Holds a lockfile for the whole
/// run, records every artifact it writes (with content hash), and can roll
/// the partial bundle back on failure.
class Bundle {
  public:
    Bundle(std::string dir, const RunConfig& config);
    ~Bundle();

    Bundle(const Bundle&) = delete;
    Bundle& operator=(const Bundle&) = delete;

    void write_text(const std::string& relpath, const std::string& content);

    /// Short one-line echo of the effective config, embedded as a comment
    /// in every artifact.
    const std::string& config_echo() const { return echo_; }

    const std::vector<std::pair<std::string, std::string>>& artifacts() const {
        return artifacts_;  // (relative path, sha256)
    }

    /// Delete everything written so far (failure path).
    void abort();

    /// Write manifest.json listing all artifacts with hashes.
    void write_manifest();

  private:
    std::string dir_;
    std::string lock_path_;
    std::string echo_;
    RunConfig config_;
    std::vector<std::pair<std::string, std::string>> artifacts_;
    bool aborted_ = false;
};

// Table renderers. Every function returns the full file content; numeric
// cells go through fmt6 so reruns are byte-identical.
std::string table1_csv(const std::vector<StatsRecord>& records, const std::string& echo);
std::string correlation_csv(const CorrMatrix& corr, const std::string& echo);
std::string matrix_csv(const std::vector<std::string>& names, const Eigen::MatrixXd& m,
                       const std::string& echo);
std::string averaged_indices_csv(const std::vector<std::string>& names,
                                 const DirectionalIndices& idx, const std::string& echo);
std::string rolling_csv(const std::vector<WindowResult>& results,
                        const std::vector<std::string>& names, const std::string& echo);
std::string npdc_long_csv(const std::vector<WindowResult>& results,
                          const std::vector<std::string>& names, const std::string& echo);
std::string covariance_csv(const ConditionalCovariances& cov, const std::string& echo);
std::string hedge_table_csv(const std::vector<HedgePairResult>& pairs, bool paired_variant,
                            const std::string& echo);
std::string table3_csv(const std::vector<StrategyRun>& runs,
                       const std::vector<std::vector<AssetHedging>>& he,
                       const std::vector<std::string>& names, const std::string& echo);
std::string table4_csv(const std::vector<StrategyRun>& runs,
                       const std::vector<PerformanceReport>& reports, const std::string& echo);
std::string cumulative_csv(const std::vector<StrategyRun>& runs,
                           const std::vector<PerformanceReport>& reports,
                           const std::string& echo);

}  // namespace spillover
