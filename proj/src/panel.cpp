#include "spillover/panel.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "spillover/errors.hpp"

namespace spillover {

const char* align_policy_name(AlignPolicy p) {
    return p == AlignPolicy::intersection ? "intersection" : "union-forward-fill";
}

AlignPolicy align_policy_from_name(const std::string& name) {
    if (name == "intersection") return AlignPolicy::intersection;
    if (name == "union-forward-fill" || name == "union_forward_fill" || name == "union-ffill")
        return AlignPolicy::union_forward_fill;
    throw config_error("unknown alignment policy '" + name +
                       "' (expected intersection or union-forward-fill)");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // Trim surrounding whitespace and stray CR from Windows line ends.
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back("");
    return fields;
}

double parse_price(const std::string& cell, const std::string& asset, std::size_t row) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw data_error("non-numeric price '" + cell + "' for " + asset + " at row " +
                         std::to_string(row));
    if (!std::isfinite(v) || v <= 0.0)
        throw data_error("non-positive price " + cell + " for " + asset + " at row " +
                         std::to_string(row));
    return v;
}

}  // namespace

PricePanel load_price_series(std::istream& in, const CsvSchema& schema) {
    std::string line;
    if (!std::getline(in, line)) throw data_error("empty document");
    const auto header = split_csv_line(line);

    std::size_t date_col = header.size();
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == schema.date_column) date_col = c;
    if (date_col == header.size())
        throw data_error("date column '" + schema.date_column + "' not found in header");

    std::vector<std::size_t> price_cols;
    std::vector<std::string> assets;
    if (schema.price_columns.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (c != date_col) {
                price_cols.push_back(c);
                assets.push_back(header[c]);
            }
    } else {
        for (const auto& want : schema.price_columns) {
            auto it = std::find(header.begin(), header.end(), want);
            if (it == header.end())
                throw data_error("price column '" + want + "' not found in header");
            price_cols.push_back(static_cast<std::size_t>(it - header.begin()));
            assets.push_back(want);
        }
    }
    if (assets.empty()) throw data_error("no price columns in document");

    struct Row {
        Date date;
        std::vector<double> prices;
        std::size_t lineno = 0;
    };
    std::vector<Row> rows;
    std::size_t lineno = 1;  // header was line 1
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw data_error("row " + std::to_string(lineno) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
        Row row;
        row.lineno = lineno;
        try {
            row.date = Date::parse(fields[date_col]);
        } catch (const data_error& e) {
            throw data_error(std::string(e.what()) + " at row " + std::to_string(lineno));
        }
        row.prices.reserve(price_cols.size());
        for (std::size_t k = 0; k < price_cols.size(); ++k)
            row.prices.push_back(parse_price(fields[price_cols[k]], assets[k], lineno));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw data_error("empty document");

    // Stable sort keeps the original file order of duplicates so the
    // reported row number is the later occurrence.
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return rows[a].date < rows[b].date;
    });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (rows[order[i]].date == rows[order[i - 1]].date) {
            const std::size_t later = std::max(order[i], order[i - 1]);
            throw data_error("duplicate date at row " + std::to_string(rows[later].lineno) +
                             " (" + rows[later].date.to_string() + ")");
        }

    PricePanel panel;
    panel.assets = assets;
    panel.dates.reserve(rows.size());
    panel.prices.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(assets.size()));
    for (std::size_t i = 0; i < order.size(); ++i) {
        panel.dates.push_back(rows[order[i]].date);
        for (std::size_t k = 0; k < assets.size(); ++k)
            panel.prices(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                rows[order[i]].prices[k];
    }
    return panel;
}

PricePanel load_price_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");
    try {
        return load_price_series(in, schema);
    } catch (const data_error& e) {
        throw data_error(path + ": " + e.what());
    }
}

PricePanel align_panels(const std::vector<PricePanel>& panels, AlignPolicy policy) {
    if (panels.size() < 2) throw data_error("align_panels needs at least 2 panels");
    for (const auto& p : panels)
        if (p.dates.empty()) throw data_error("align_panels: empty input panel");

    std::vector<Date> calendar;
    if (policy == AlignPolicy::intersection) {
        std::set<int> acc;
        for (const auto& d : panels[0].dates) acc.insert(d.serial());
        for (std::size_t p = 1; p < panels.size(); ++p) {
            std::set<int> cur;
            for (const auto& d : panels[p].dates) cur.insert(d.serial());
            std::set<int> keep;
            for (int s : acc)
                if (cur.count(s)) keep.insert(s);
            acc = std::move(keep);
        }
        if (acc.empty()) throw data_error("empty intersection of trading calendars");
        for (int s : acc) calendar.emplace_back(s);
    } else {
        std::set<int> all;
        for (const auto& p : panels)
            for (const auto& d : p.dates) all.insert(d.serial());
        for (int s : all) calendar.emplace_back(s);
    }

    PricePanel out;
    out.dates = calendar;
    Eigen::Index total_cols = 0;
    for (const auto& p : panels) total_cols += p.cols();
    out.prices.resize(static_cast<Eigen::Index>(calendar.size()), total_cols);

    Eigen::Index col_base = 0;
    for (const auto& p : panels) {
        std::map<int, Eigen::Index> row_of;
        for (std::size_t r = 0; r < p.dates.size(); ++r)
            row_of[p.dates[r].serial()] = static_cast<Eigen::Index>(r);
        Eigen::Index last_row = -1;
        for (std::size_t t = 0; t < calendar.size(); ++t) {
            auto it = row_of.find(calendar[t].serial());
            if (it != row_of.end()) {
                last_row = it->second;
            } else if (last_row < 0) {
                throw data_error("leading gap: no price for " + p.assets[0] + " on or before " +
                                 calendar[t].to_string());
            }
            for (Eigen::Index k = 0; k < p.cols(); ++k)
                out.prices(static_cast<Eigen::Index>(t), col_base + k) = p.prices(last_row, k);
        }
        for (const auto& a : p.assets) out.assets.push_back(a);
        col_base += p.cols();
    }

    std::set<std::string> seen;
    for (const auto& a : out.assets)
        if (!seen.insert(a).second)
            throw data_error("duplicate asset name '" + a + "' across panels");
    return out;
}

ReturnPanel log_returns(const PricePanel& panel) {
    if (panel.rows() < 2) throw data_error("log_returns needs at least 2 price rows");
    ReturnPanel out;
    out.assets = panel.assets;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    out.returns.resize(panel.rows() - 1, panel.cols());
    for (Eigen::Index t = 0; t + 1 < panel.rows(); ++t)
        for (Eigen::Index k = 0; k < panel.cols(); ++k) {
            const double p0 = panel.prices(t, k);
            const double p1 = panel.prices(t + 1, k);
            if (!(p0 > 0.0) || !(p1 > 0.0))
                throw data_error("non-positive price for " + panel.assets[static_cast<std::size_t>(k)] +
                                 " at " + panel.dates[static_cast<std::size_t>(t)].to_string());
            out.returns(t, k) = std::log(p1 / p0);
        }
    return out;
}

}  // namespace spillover
