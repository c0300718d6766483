#include "spillover/connectedness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "spillover/errors.hpp"

namespace spillover {

namespace {

void check_window_shape(Eigen::Index rows, Eigen::Index k, int p) {
    if (k < 2) throw data_error("decomposition needs at least 2 assets");
    if (p < 1) throw data_error("lag order must be >= 1");
    const Eigen::Index regressors = (k - 1) + static_cast<Eigen::Index>(p) * k;
    if (rows < 5 * regressors)
        throw data_error("window too short: " + std::to_string(rows) + " rows for " +
                         std::to_string(regressors) + " regressors (need " +
                         std::to_string(5 * regressors) + ")");
}

Eigen::VectorXd standardized(const Eigen::VectorXd& v) {
    const double m = v.mean();
    Eigen::VectorXd centered = v.array() - m;
    const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(v.size() - 1));
    if (sd == 0.0) throw numeric_error("zero-variance column within window");
    return centered / sd;
}

// Columns of the extended window: K contemporaneous series over rows
// p..T_w-1 followed by p lag blocks of all K series.
Eigen::MatrixXd extended_window(const Eigen::MatrixXd& window, int p) {
    const Eigen::Index k = window.cols();
    const Eigen::Index rows = window.rows() - p;
    Eigen::MatrixXd ext(rows, k * (p + 1));
    ext.leftCols(k) = window.bottomRows(rows);
    for (int ell = 1; ell <= p; ++ell)
        ext.middleCols(static_cast<Eigen::Index>(ell) * k, k) =
            window.middleRows(p - ell, rows);
    return ext;
}

}  // namespace

RegressionDesign build_design(const Eigen::MatrixXd& window, int target, int lag_order) {
    const Eigen::Index k = window.cols();
    check_window_shape(window.rows(), k, lag_order);
    if (target < 0 || target >= k) throw data_error("build_design: target out of range");

    const Eigen::MatrixXd ext = extended_window(window, lag_order);
    RegressionDesign design;
    design.target = target;
    design.lag_order = lag_order;
    design.y = standardized(ext.col(target));

    const Eigen::Index n_reg = (k - 1) + static_cast<Eigen::Index>(lag_order) * k;
    design.x.resize(ext.rows(), n_reg);
    design.source_asset.reserve(static_cast<std::size_t>(n_reg));
    design.source_lag.reserve(static_cast<std::size_t>(n_reg));
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
        if (i == target) continue;
        design.x.col(col++) = standardized(ext.col(i));
        design.source_asset.push_back(static_cast<int>(i));
        design.source_lag.push_back(0);
    }
    for (int ell = 1; ell <= lag_order; ++ell)
        for (Eigen::Index i = 0; i < k; ++i) {
            design.x.col(col++) =
                standardized(ext.col(static_cast<Eigen::Index>(ell) * k + i));
            design.source_asset.push_back(static_cast<int>(i));
            design.source_lag.push_back(ell);
        }
    return design;
}

SpilloverDecomposition decompose_window(const Eigen::MatrixXd& window,
                                        const std::vector<std::string>& assets,
                                        const DecomposeOptions& opts,
                                        const std::string& label) {
    const Eigen::Index k = window.cols();
    if (static_cast<Eigen::Index>(assets.size()) != k)
        throw data_error("decompose_window: asset names do not match columns");
    check_window_shape(window.rows(), k, opts.lag_order);
    {
        std::set<std::string> uniq(assets.begin(), assets.end());
        if (static_cast<Eigen::Index>(uniq.size()) != k)
            throw data_error("decompose_window: duplicate asset names");
    }

    // Canonical (name-sorted) computation order makes the result an exact
    // permutation of itself under any relabeling of the input columns.
    std::vector<Eigen::Index> canon(static_cast<std::size_t>(k));
    std::iota(canon.begin(), canon.end(), Eigen::Index{0});
    std::sort(canon.begin(), canon.end(), [&](Eigen::Index a, Eigen::Index b) {
        return assets[static_cast<std::size_t>(a)] < assets[static_cast<std::size_t>(b)];
    });
    Eigen::MatrixXd sorted(window.rows(), k);
    for (Eigen::Index c = 0; c < k; ++c)
        sorted.col(c) = window.col(canon[static_cast<std::size_t>(c)]);

    const int p = opts.lag_order;
    const Eigen::MatrixXd ext = extended_window(sorted, p);
    Eigen::MatrixXd corr;
    try {
        corr = column_correlation(ext, opts.method);
    } catch (const numeric_error& e) {
        // Translate the extended-column index back to an asset name.
        const std::string what = e.what();
        const auto pos = what.find_last_of(' ');
        std::string annotated = what;
        if (pos != std::string::npos) {
            const long idx = std::strtol(what.c_str() + pos + 1, nullptr, 10);
            if (idx >= 0 && idx < k * (p + 1)) {
                const Eigen::Index asset = idx % k;
                const int lag = static_cast<int>(idx / k);
                annotated = "zero-variance column within window: " +
                            assets[static_cast<std::size_t>(canon[static_cast<std::size_t>(asset)])] +
                            (lag ? " (lag " + std::to_string(lag) + ")" : "");
            }
        }
        throw numeric_error(annotated);
    }

    Eigen::MatrixXd contemp = Eigen::MatrixXd::Zero(k, k);
    Eigen::MatrixXd lagged = Eigen::MatrixXd::Zero(k, k);

    const Eigen::Index n_reg = (k - 1) + static_cast<Eigen::Index>(p) * k;
    std::vector<Eigen::Index> reg_cols(static_cast<std::size_t>(n_reg));
    for (Eigen::Index target = 0; target < k; ++target) {
        Eigen::Index c = 0;
        for (Eigen::Index i = 0; i < k; ++i)
            if (i != target) reg_cols[static_cast<std::size_t>(c++)] = i;
        for (Eigen::Index j = k; j < k * (p + 1); ++j)
            reg_cols[static_cast<std::size_t>(c++)] = j;

        Eigen::MatrixXd rx(n_reg, n_reg);
        Eigen::VectorXd rxy(n_reg);
        for (Eigen::Index a = 0; a < n_reg; ++a) {
            rxy(a) = corr(reg_cols[static_cast<std::size_t>(a)], target);
            for (Eigen::Index b = 0; b < n_reg; ++b)
                rx(a, b) = corr(reg_cols[static_cast<std::size_t>(a)],
                                reg_cols[static_cast<std::size_t>(b)]);
        }

        Eigen::VectorXd shares;
        try {
            shares = attribution_from_correlations(rx, rxy, opts.method != CorrMethod::pearson,
                                                   opts.guards);
        } catch (const numeric_error& e) {
            throw numeric_error("asset " +
                                assets[static_cast<std::size_t>(canon[static_cast<std::size_t>(target)])] +
                                ": " + e.what());
        }

        for (Eigen::Index a = 0; a < n_reg; ++a) {
            const Eigen::Index src = reg_cols[static_cast<std::size_t>(a)] % k;
            const bool is_lag = reg_cols[static_cast<std::size_t>(a)] >= k;
            const double pct = 100.0 * shares(a);
            if (is_lag)
                lagged(target, src) += pct;
            else
                contemp(target, src) += pct;
        }
    }

    // Map canonical order back to panel order.
    SpilloverDecomposition out;
    out.window_label = label;
    out.contemporaneous = Eigen::MatrixXd::Zero(k, k);
    out.lagged = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b) {
            out.contemporaneous(canon[static_cast<std::size_t>(a)],
                                canon[static_cast<std::size_t>(b)]) = contemp(a, b);
            out.lagged(canon[static_cast<std::size_t>(a)], canon[static_cast<std::size_t>(b)]) =
                lagged(a, b);
        }
    return out;
}

DirectionalIndices directional_indices(const SpilloverDecomposition& spill,
                                       bool include_own_lag_in_tci) {
    const Eigen::Index k = spill.size();
    const Eigen::MatrixXd& c = spill.contemporaneous;
    const Eigen::MatrixXd& l = spill.lagged;

    // Sums run over sorted addends so that a column permutation of the
    // decomposition permutes every index bit-for-bit.
    std::vector<double> addends;
    addends.reserve(static_cast<std::size_t>(k));
    auto sorted_sum = [&addends]() {
        std::sort(addends.begin(), addends.end());
        double total = 0.0;
        for (double v : addends) total += v;
        return total;
    };

    DirectionalIndices idx;
    idx.to_c = Eigen::VectorXd::Zero(k);
    idx.to_l = Eigen::VectorXd::Zero(k);
    idx.from_c = Eigen::VectorXd::Zero(k);
    idx.from_l = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const Eigen::MatrixXd* sources[2] = {&c, &l};
        Eigen::VectorXd* to_out[2] = {&idx.to_c, &idx.to_l};
        Eigen::VectorXd* from_out[2] = {&idx.from_c, &idx.from_l};
        for (int part = 0; part < 2; ++part) {
            addends.clear();
            for (Eigen::Index j = 0; j < k; ++j)
                if (j != i) addends.push_back((*sources[part])(j, i));
            (*to_out[part])(i) = sorted_sum();
            addends.clear();
            for (Eigen::Index j = 0; j < k; ++j)
                if (j != i) addends.push_back((*sources[part])(i, j));
            (*from_out[part])(i) = sorted_sum();
        }
    }
    idx.to = idx.to_c + idx.to_l;
    idx.from = idx.from_c + idx.from_l;
    idx.net_c = idx.to_c - idx.from_c;
    idx.net_l = idx.to_l - idx.from_l;
    idx.net = idx.to - idx.from;

    addends.assign(idx.to_c.begin(), idx.to_c.end());
    idx.tci_c = sorted_sum() / static_cast<double>(k);
    addends.assign(idx.to_l.begin(), idx.to_l.end());
    if (include_own_lag_in_tci)
        for (Eigen::Index i = 0; i < k; ++i) addends.push_back(l(i, i));
    idx.tci_l = sorted_sum() / static_cast<double>(k);
    idx.tci = idx.tci_c + idx.tci_l;

    idx.npdc = Eigen::MatrixXd::Zero(k, k);
    idx.npdc_c = Eigen::MatrixXd::Zero(k, k);
    idx.npdc_l = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j) {
            const double vc = c(j, i) - c(i, j);
            const double vl = l(j, i) - l(i, j);
            const double v = (c(j, i) + l(j, i)) - (c(i, j) + l(i, j));
            idx.npdc_c(i, j) = vc;
            idx.npdc_c(j, i) = -vc;
            idx.npdc_l(i, j) = vl;
            idx.npdc_l(j, i) = -vl;
            idx.npdc(i, j) = v;
            idx.npdc(j, i) = -v;
        }
    return idx;
}

namespace {

std::vector<Eigen::Index> window_ends(const ReturnPanel& panel, const RollingConfig& cfg) {
    if (cfg.window < 2) throw data_error("rolling window must be >= 2");
    if (cfg.step < 1) throw data_error("rolling step must be >= 1");
    const Eigen::Index rows = panel.rows();
    if (rows < cfg.window)
        throw data_error("window too short: panel has " + std::to_string(rows) +
                         " rows, window is " + std::to_string(cfg.window));
    check_window_shape(cfg.window, panel.cols(), cfg.decompose.lag_order);
    std::vector<Eigen::Index> ends;
    for (Eigen::Index e = cfg.window - 1; e < rows; e += cfg.step) ends.push_back(e);
    return ends;
}

WindowResult compute_one_window(const ReturnPanel& panel, const RollingConfig& cfg,
                                Eigen::Index end) {
    WindowResult res;
    res.end_date = panel.dates[static_cast<std::size_t>(end)];
    try {
        const Eigen::MatrixXd window =
            panel.returns.middleRows(end - cfg.window + 1, cfg.window);
        res.spill = decompose_window(window, panel.assets, cfg.decompose,
                                     res.end_date.to_string());
        res.indices = directional_indices(*res.spill, cfg.include_own_lag_in_tci);
    } catch (const std::exception& e) {
        res.spill.reset();
        res.indices.reset();
        res.error = std::string("window ending ") + res.end_date.to_string() + ": " + e.what();
    }
    return res;
}

}  // namespace

std::vector<WindowResult> rolling_connectedness_serial(const ReturnPanel& panel,
                                                       const RollingConfig& cfg) {
    const auto ends = window_ends(panel, cfg);
    std::vector<WindowResult> results(ends.size());
    for (std::size_t w = 0; w < ends.size(); ++w)
        results[w] = compute_one_window(panel, cfg, ends[w]);
    return results;
}

std::vector<WindowResult> rolling_connectedness_parallel(const ReturnPanel& panel,
                                                         const RollingConfig& cfg) {
    const auto ends = window_ends(panel, cfg);
    std::vector<WindowResult> results(ends.size());
    const auto n = static_cast<std::ptrdiff_t>(ends.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t w = 0; w < n; ++w)
        results[static_cast<std::size_t>(w)] =
            compute_one_window(panel, cfg, ends[static_cast<std::size_t>(w)]);
    return results;
}

std::vector<WindowResult> rolling_connectedness(const ReturnPanel& panel,
                                                const RollingConfig& cfg) {
    return rolling_connectedness_parallel(panel, cfg);
}

AveragedConnectedness averaged_spillover(const std::vector<WindowResult>& results,
                                         bool include_own_lag_in_tci) {
    if (results.empty()) throw data_error("averaged_spillover: no windows");
    AveragedConnectedness avg;
    Eigen::MatrixXd csum, lsum;
    for (const auto& r : results) {
        if (r.gap()) {
            ++avg.gaps;
            continue;
        }
        if (avg.windows_used == 0) {
            csum = r.spill->contemporaneous;
            lsum = r.spill->lagged;
        } else {
            csum += r.spill->contemporaneous;
            lsum += r.spill->lagged;
        }
        ++avg.windows_used;
    }
    if (avg.windows_used == 0) throw numeric_error("averaged_spillover: all windows are gaps");
    avg.spill.contemporaneous = csum / static_cast<double>(avg.windows_used);
    avg.spill.lagged = lsum / static_cast<double>(avg.windows_used);
    avg.spill.window_label = "averaged";
    avg.indices = directional_indices(avg.spill, include_own_lag_in_tci);
    return avg;
}

Eigen::MatrixXd pci_matrix(const SpilloverDecomposition& spill, PciVariant variant) {
    const Eigen::Index k = spill.size();
    const Eigen::MatrixXd& c = spill.contemporaneous;
    const Eigen::MatrixXd& l = spill.lagged;
    constexpr double kMaxBilateralMass = 200.0;  // percentage points
    constexpr double kFloor = 1e-6;

    Eigen::MatrixXd pci = Eigen::MatrixXd::Identity(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j) {
            double mass = 0.0;
            switch (variant) {
                case PciVariant::total:
                    mass = c(i, j) + l(i, j) + c(j, i) + l(j, i);
                    break;
                case PciVariant::contemporaneous:
                    mass = c(i, j) + c(j, i);
                    break;
                case PciVariant::lagged:
                    mass = l(i, j) + l(j, i);
                    break;
            }
            double v = std::min(mass / kMaxBilateralMass, 1.0);
            if (v < kFloor) v = kFloor;
            pci(i, j) = v;
            pci(j, i) = v;
        }
    return pci;
}

}  // namespace spillover
