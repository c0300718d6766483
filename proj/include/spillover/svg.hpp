#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spillover/dates.hpp"

namespace spillover {

struct ChartSeries {
    std::string label;
    std::vector<double> values;
};

/// Static line chart over a shared date axis.
std::string svg_line_chart(const std::string& title, const std::vector<Date>& dates,
                           const std::vector<ChartSeries>& series,
                           const std::string& comment = "");

/// K x K heatmap. Cells flagged in `mask` (optional, same shape) are
/// crossed out. `lo`/`hi` pin the color scale.
std::string svg_heatmap(const std::string& title, const std::vector<std::string>& names,
                        const Eigen::MatrixXd& values, double lo, double hi,
                        const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>* mask = nullptr,
                        const std::string& comment = "");

}  // namespace spillover
