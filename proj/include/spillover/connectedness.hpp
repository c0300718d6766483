#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spillover/correlation.hpp"
#include "spillover/panel.hpp"
#include "spillover/relative_weights.hpp"

namespace spillover {

/// One regression of the decomposition: response is asset k, regressors are
/// the K-1 other contemporaneous series followed by p lags of all K series,
/// every column z-scored within the window.
struct RegressionDesign {
    int target = 0;
    int lag_order = 1;
    Eigen::MatrixXd x;   // (T_w - p) x ((K-1) + p K), standardized
    Eigen::VectorXd y;   // standardized response
    /// Panel column feeding design column j (contemporaneous block first,
    /// then lag 1 of assets 0..K-1, lag 2, ...).
    std::vector<int> source_asset;
    std::vector<int> source_lag;  // 0 = contemporaneous
};

RegressionDesign build_design(const Eigen::MatrixXd& window, int target, int lag_order);

/// Variance-share matrices in percentage points. contemporaneous(k,i) is the
/// share of var(asset k) attributed to the concurrent move of asset i
/// (zero diagonal); lagged(k,i) collects the p lag shares of source i, own
/// lags on the diagonal.
struct SpilloverDecomposition {
    Eigen::MatrixXd contemporaneous;  // K x K
    Eigen::MatrixXd lagged;           // K x K
    std::string window_label;

    Eigen::Index size() const { return contemporaneous.rows(); }
    /// Explained variance of the regression for asset k, percentage points.
    double row_r2(Eigen::Index k) const {
        return contemporaneous.row(k).sum() + lagged.row(k).sum();
    }
};

struct DecomposeOptions {
    int lag_order = 1;
    CorrMethod method = CorrMethod::pearson;
    AttributionGuards guards;
};

/// Run the K attribution regressions over one window. Computation happens
/// in a canonical (name-sorted) column order so that permuting panel
/// columns permutes the result exactly; outputs are indexed in panel order.
SpilloverDecomposition decompose_window(const Eigen::MatrixXd& window,
                                        const std::vector<std::string>& assets,
                                        const DecomposeOptions& opts,
                                        const std::string& label = "");

/// Directional spillover indices derived from one decomposition.
/// npdc(i,j) = (C(j,i)+L(j,i)) - (C(i,j)+L(i,j)), antisymmetric by
/// construction.
struct DirectionalIndices {
    double tci = 0.0, tci_c = 0.0, tci_l = 0.0;
    Eigen::VectorXd to, to_c, to_l;
    Eigen::VectorXd from, from_c, from_l;
    Eigen::VectorXd net, net_c, net_l;
    Eigen::MatrixXd npdc;
    Eigen::MatrixXd npdc_c;
    Eigen::MatrixXd npdc_l;
};

DirectionalIndices directional_indices(const SpilloverDecomposition& spill,
                                       bool include_own_lag_in_tci = false);

struct RollingConfig {
    int window = 200;
    int step = 1;
    DecomposeOptions decompose;
    bool include_own_lag_in_tci = false;
};

/// One rolling-window outcome. Windows whose regression fails are emitted
/// as gap records carrying the error text instead of aborting the pass.
struct WindowResult {
    Date end_date;
    std::optional<SpilloverDecomposition> spill;
    std::optional<DirectionalIndices> indices;
    std::string error;

    bool gap() const { return !spill.has_value(); }
};

/// Rolling pass, windows advancing by `step`, result at date t computed
/// from rows t-window+1..t. The parallel variant distributes windows over
/// OpenMP threads; every window writes only its own slot, so it is
/// bit-identical to the serial reference.
std::vector<WindowResult> rolling_connectedness_serial(const ReturnPanel& panel,
                                                       const RollingConfig& cfg);
std::vector<WindowResult> rolling_connectedness_parallel(const ReturnPanel& panel,
                                                         const RollingConfig& cfg);
std::vector<WindowResult> rolling_connectedness(const ReturnPanel& panel,
                                                const RollingConfig& cfg);

struct AveragedConnectedness {
    SpilloverDecomposition spill;
    DirectionalIndices indices;
    int windows_used = 0;
    int gaps = 0;
};

/// Element-wise mean of the non-gap windows, indices recomputed from the
/// averaged matrices. Throws numeric_error when every window is a gap.
AveragedConnectedness averaged_spillover(const std::vector<WindowResult>& results,
                                         bool include_own_lag_in_tci = false);

enum class PciVariant { total, contemporaneous, lagged };

/// Pairwise connectedness index matrix: bilateral spillover mass divided by
/// the attainable 200 percentage points, unit diagonal, off-diagonal
/// entries floored at 1e-6 so the matrix stays invertible downstream.
Eigen::MatrixXd pci_matrix(const SpilloverDecomposition& spill,
                           PciVariant variant = PciVariant::total);

}  // namespace spillover
