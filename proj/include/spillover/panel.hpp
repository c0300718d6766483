#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spillover/dates.hpp"

namespace spillover {

/// Column mapping for a raw price CSV. By default the date column is named
/// "date" and every other column is taken as a price series whose asset
/// name is its header.
struct CsvSchema {
    std::string date_column = "date";
    /// If non-empty, keep only these price columns (in this order).
    std::vector<std::string> price_columns;
};

/// Aligned matrix of positive price levels, one column per asset.
struct PricePanel {
    std::vector<Date> dates;           // strictly increasing
    std::vector<std::string> assets;   // unique, K >= 1
    Eigen::MatrixXd prices;            // T x K, all > 0

    Eigen::Index rows() const { return prices.rows(); }
    Eigen::Index cols() const { return prices.cols(); }
};

/// Log-return panel derived from a PricePanel; one row fewer.
struct ReturnPanel {
    std::vector<Date> dates;
    std::vector<std::string> assets;
    Eigen::MatrixXd returns;           // (T-1) x K

    Eigen::Index rows() const { return returns.rows(); }
    Eigen::Index cols() const { return returns.cols(); }
};

enum class AlignPolicy { intersection, union_forward_fill };

const char* align_policy_name(AlignPolicy p);
AlignPolicy align_policy_from_name(const std::string& name);

/// Parse one CSV document into a PricePanel. Errors carry the 1-based row
/// number of the offending record. Rows are sorted ascending by date;
/// duplicate dates are rejected.
PricePanel load_price_series(std::istream& in, const CsvSchema& schema = {});
PricePanel load_price_csv(const std::string& path, const CsvSchema& schema = {});

/// Join several panels onto one calendar. Under intersection the output
/// dates are the common trading days; under union-forward-fill every date
/// observed anywhere is kept and gaps are filled with the last observed
/// price. Column order follows the input panel order.
PricePanel align_panels(const std::vector<PricePanel>& panels, AlignPolicy policy);

/// returns[t][k] = ln(prices[t+1][k] / prices[t][k])
ReturnPanel log_returns(const PricePanel& panel);


}  // namespace spillover
