#include "spillover/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "spillover/errors.hpp"

namespace spillover {

const char* corr_method_name(CorrMethod m) {
    switch (m) {
        case CorrMethod::pearson: return "pearson";
        case CorrMethod::spearman: return "spearman";
        case CorrMethod::kendall: return "kendall";
    }
    return "?";
}

CorrMethod corr_method_from_name(const std::string& name) {
    if (name == "pearson") return CorrMethod::pearson;
    if (name == "spearman") return CorrMethod::spearman;
    if (name == "kendall") return CorrMethod::kendall;
    throw config_error("unknown correlation method '" + name +
                       "' (expected pearson, spearman or kendall)");
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw data_error("pearson: mismatched or too-short series");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw numeric_error("pearson: zero-variance series");
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> average_ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

namespace {

// Counts exchanges a merge sort performs on y; each exchange is one
// discordant pair once the data are ordered by x.
std::uint64_t merge_count(std::vector<double>& y, std::vector<double>& tmp,
                          std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t swaps = merge_count(y, tmp, lo, mid) + merge_count(y, tmp, mid, hi);
    std::size_t a = lo, b = mid, out = lo;
    while (a < mid && b < hi) {
        if (y[b] < y[a]) {
            swaps += mid - a;
            tmp[out++] = y[b++];
        } else {
            tmp[out++] = y[a++];
        }
    }
    while (a < mid) tmp[out++] = y[a++];
    while (b < hi) tmp[out++] = y[b++];
    std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo),
              tmp.begin() + static_cast<std::ptrdiff_t>(hi),
              y.begin() + static_cast<std::ptrdiff_t>(lo));
    return swaps;
}

std::uint64_t tie_pairs(std::span<const double> sorted) {
    std::uint64_t pairs = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const std::uint64_t run = j - i + 1;
        pairs += run * (run - 1) / 2;
        i = j + 1;
    }
    return pairs;
}

}  // namespace

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (y.size() != n || n < 2) throw data_error("kendall: mismatched or too-short series");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    // Tie bookkeeping on the (x, y) ordering.
    std::uint64_t xtie = 0, jointtie = 0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
            const std::uint64_t run = j - i + 1;
            xtie += run * (run - 1) / 2;
            std::size_t a = i;
            while (a <= j) {
                std::size_t b = a;
                while (b + 1 <= j && y[order[b + 1]] == y[order[a]]) ++b;
                const std::uint64_t jr = b - a + 1;
                jointtie += jr * (jr - 1) / 2;
                a = b + 1;
            }
            i = j + 1;
        }
    }

    std::vector<double> ysorted(n), tmp(n);
    for (std::size_t i = 0; i < n; ++i) ysorted[i] = y[order[i]];
    const std::uint64_t swaps = merge_count(ysorted, tmp, 0, n);
    // ysorted is now fully sorted; reuse it for the y tie count.
    const std::uint64_t ytie = tie_pairs(ysorted);

    const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (xtie == total || ytie == total)
        throw numeric_error("kendall: constant series");

    const double con_minus_dis = static_cast<double>(total) - static_cast<double>(xtie) -
                                 static_cast<double>(ytie) + static_cast<double>(jointtie) -
                                 2.0 * static_cast<double>(swaps);
    const double denom = std::sqrt(static_cast<double>(total - xtie)) *
                         std::sqrt(static_cast<double>(total - ytie));
    return con_minus_dis / denom;
}

Eigen::MatrixXd column_correlation(const Eigen::MatrixXd& data, CorrMethod method) {
    const auto cols = data.cols();
    const auto rows = data.rows();
    if (rows < 2) throw data_error("correlation: need at least 2 rows");

    for (Eigen::Index c = 0; c < cols; ++c) {
        const double lo = data.col(c).minCoeff();
        const double hi = data.col(c).maxCoeff();
        if (lo == hi)
            throw numeric_error("zero-variance column " + std::to_string(c));
    }

    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(cols, cols);
    if (method == CorrMethod::kendall) {
        std::vector<std::vector<double>> colv(static_cast<std::size_t>(cols));
        for (Eigen::Index c = 0; c < cols; ++c)
            colv[static_cast<std::size_t>(c)] =
                std::vector<double>(data.col(c).begin(), data.col(c).end());
        for (Eigen::Index i = 0; i < cols; ++i)
            for (Eigen::Index j = i + 1; j < cols; ++j) {
                const double t = kendall_tau_b(colv[static_cast<std::size_t>(i)],
                                               colv[static_cast<std::size_t>(j)]);
                out(i, j) = t;
                out(j, i) = t;
            }
        return out;
    }

    // Pearson directly, Spearman as Pearson on average ranks.
    Eigen::MatrixXd work(rows, cols);
    if (method == CorrMethod::pearson) {
        work = data;
    } else {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto ranks = average_ranks(
                std::span<const double>(data.col(c).data(), static_cast<std::size_t>(rows)));
            for (Eigen::Index r = 0; r < rows; ++r)
                work(r, c) = ranks[static_cast<std::size_t>(r)];
        }
    }
    Eigen::RowVectorXd means = work.colwise().mean();
    work.rowwise() -= means;
    Eigen::VectorXd norms(cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        norms(c) = work.col(c).norm();
        if (norms(c) == 0.0)
            throw numeric_error("zero-variance column " + std::to_string(c));
    }
    for (Eigen::Index i = 0; i < cols; ++i)
        for (Eigen::Index j = i + 1; j < cols; ++j) {
            const double r = work.col(i).dot(work.col(j)) / (norms(i) * norms(j));
            out(i, j) = r;
            out(j, i) = r;
        }
    return out;
}

}  // namespace spillover
