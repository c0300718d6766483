#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace spillover {

enum class CorrMethod { pearson, spearman, kendall };

const char* corr_method_name(CorrMethod m);
CorrMethod corr_method_from_name(const std::string& name);

double pearson(std::span<const double> x, std::span<const double> y);

/// Ranks with ties replaced by their average rank (1-based).
std::vector<double> average_ranks(std::span<const double> x);

/// Kendall tau-b via the merge-sort inversion count, O(n log n).
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// Correlation matrix of the columns of `data` under the chosen method.
/// Throws numeric_error naming the column if one has zero variance.
Eigen::MatrixXd column_correlation(const Eigen::MatrixXd& data, CorrMethod method);

}  // namespace spillover
