#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spillover/errors.hpp"
#include "spillover/panel.hpp"
#include "spillover/rng.hpp"
#include "spillover/simulate.hpp"

using namespace spillover;

namespace {

PricePanel panel_from(const std::string& csv, const CsvSchema& schema = {}) {
    std::istringstream in(csv);
    return load_price_series(in, schema);
}

}  // namespace

TEST_CASE("load_price_series parses a minimal document") {
    const auto p = panel_from(
        "date,asset\n"
        "2021-05-25,100\n"
        "2021-05-26,101\n"
        "2021-05-27,102\n");
    CHECK(p.rows() == 3);
    CHECK(p.cols() == 1);
    CHECK(p.assets[0] == "asset");
    CHECK(p.dates.front().to_string() == "2021-05-25");
    CHECK(p.prices(2, 0) == 102.0);
}

TEST_CASE("load_price_series sorts rows by date") {
    const auto p = panel_from(
        "date,a\n"
        "2021-05-27,102\n"
        "2021-05-25,100\n"
        "2021-05-26,101\n");
    CHECK(p.dates.front().to_string() == "2021-05-25");
    CHECK(p.prices(0, 0) == 100.0);
    CHECK(p.prices(2, 0) == 102.0);
}

TEST_CASE("load_price_series rejects duplicate dates with the row number") {
    CHECK_THROWS_WITH_AS(panel_from("date,a\n"
                                    "2021-05-25,100\n"
                                    "2021-05-25,101\n"),
                         doctest::Contains("duplicate date at row 3"), data_error);
}

TEST_CASE("load_price_series names the offending cell") {
    CHECK_THROWS_WITH_AS(panel_from("date,a\n"
                                    "2021-05-25,abc\n"),
                         doctest::Contains("non-numeric price 'abc' for a at row 2"),
                         data_error);
    CHECK_THROWS_WITH_AS(panel_from("date,a\n"
                                    "2021/05/25,100\n"),
                         doctest::Contains("row 2"), data_error);
    CHECK_THROWS_AS(panel_from("date,a\n"), data_error);
    CHECK_THROWS_AS(panel_from(""), data_error);
    CHECK_THROWS_WITH_AS(panel_from("date,a\n2021-05-25,-3\n"),
                         doctest::Contains("non-positive"), data_error);
}

TEST_CASE("schema selects and orders price columns") {
    CsvSchema schema;
    schema.price_columns = {"b", "a"};
    const auto p = panel_from("date,a,b\n2021-05-25,1,2\n2021-05-26,3,4\n", schema);
    CHECK(p.assets == std::vector<std::string>{"b", "a"});
    CHECK(p.prices(0, 0) == 2.0);
    CHECK(p.prices(0, 1) == 1.0);
}

namespace {

PricePanel week_panel(const std::vector<int>& day_offsets, const std::string& name,
                      double base) {
    PricePanel p;
    p.assets = {name};
    p.prices.resize(static_cast<Eigen::Index>(day_offsets.size()), 1);
    const Date monday = Date::from_ymd(2021, 6, 7);
    for (std::size_t i = 0; i < day_offsets.size(); ++i) {
        p.dates.push_back(Date(monday.serial() + day_offsets[i]));
        p.prices(static_cast<Eigen::Index>(i), 0) = base + static_cast<double>(i);
    }
    return p;
}

}  // namespace

TEST_CASE("align_panels intersection keeps common trading days") {
    const auto etf = week_panel({0, 1, 2, 3, 4}, "etf", 100.0);          // Mon..Fri
    const auto coin = week_panel({0, 1, 2, 3, 4, 5, 6}, "coin", 50.0);   // Mon..Sun
    const auto joined = align_panels({etf, coin}, AlignPolicy::intersection);
    CHECK(joined.rows() == 5);
    CHECK(joined.assets == std::vector<std::string>{"etf", "coin"});
    CHECK(joined.prices(4, 0) == 104.0);
    CHECK(joined.prices(4, 1) == 54.0);
}

TEST_CASE("align_panels union forward-fills the weekend") {
    const auto etf = week_panel({0, 1, 2, 3, 4}, "etf", 100.0);
    const auto coin = week_panel({0, 1, 2, 3, 4, 5, 6}, "coin", 50.0);
    const auto joined = align_panels({etf, coin}, AlignPolicy::union_forward_fill);
    CHECK(joined.rows() == 7);
    // Saturday and Sunday carry Friday's ETF price.
    CHECK(joined.prices(5, 0) == 104.0);
    CHECK(joined.prices(6, 0) == 104.0);
    CHECK(joined.prices(6, 1) == 56.0);
}

TEST_CASE("align_panels rejects disjoint calendars and leading gaps") {
    const auto a = week_panel({0, 1}, "a", 100.0);
    const auto b = week_panel({5, 6}, "b", 50.0);
    CHECK_THROWS_WITH_AS(align_panels({a, b}, AlignPolicy::intersection),
                         doctest::Contains("empty intersection"), data_error);
    CHECK_THROWS_WITH_AS(align_panels({b, a}, AlignPolicy::union_forward_fill),
                         doctest::Contains("leading gap"), data_error);
}

TEST_CASE("log_returns matches hand-computed values") {
    PricePanel p;
    p.assets = {"a"};
    p.dates = {Date::from_ymd(2021, 1, 1), Date::from_ymd(2021, 1, 2),
               Date::from_ymd(2021, 1, 3), Date::from_ymd(2021, 1, 4)};
    p.prices.resize(4, 1);
    p.prices << 100.0, 100.0, 100.0 * std::exp(1.0), 100.0 * std::exp(1.0) * 0.9;
    const auto r = log_returns(p);
    CHECK(r.rows() == 3);
    CHECK(r.dates.size() == 3);
    CHECK(r.returns(0, 0) == 0.0);
    CHECK(r.returns(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    // ln(0.9), hand value
    CHECK(r.returns(2, 0) == doctest::Approx(-0.105360515657826).epsilon(1e-12));
}

TEST_CASE("price round-trip: exp of cumulative log returns restores prices") {
    const auto prices = simulate_demo_prices(7, 300);
    const auto rets = log_returns(prices);
    for (Eigen::Index k = 0; k < prices.cols(); ++k) {
        double level = prices.prices(0, k);
        for (Eigen::Index t = 0; t < rets.rows(); ++t) {
            level *= std::exp(rets.returns(t, k));
            CHECK(level == doctest::Approx(prices.prices(t + 1, k)).epsilon(1e-10));
        }
    }
}

TEST_CASE("align then log_returns commutes with per-asset returns on shared dates") {
    const auto etf = week_panel({0, 1, 2, 3, 4}, "etf", 100.0);
    const auto coin = week_panel({0, 2, 3, 4, 6}, "coin", 50.0);
    const auto joined = align_panels({etf, coin}, AlignPolicy::intersection);
    const auto joint_rets = log_returns(joined);

    for (int which = 0; which < 2; ++which) {
        const auto& src = which == 0 ? etf : coin;
        PricePanel restricted;
        restricted.assets = src.assets;
        std::vector<double> vals;
        for (std::size_t i = 0; i < src.dates.size(); ++i)
            for (const auto& d : joined.dates)
                if (src.dates[i] == d) {
                    restricted.dates.push_back(src.dates[i]);
                    vals.push_back(src.prices(static_cast<Eigen::Index>(i), 0));
                }
        restricted.prices.resize(static_cast<Eigen::Index>(vals.size()), 1);
        for (std::size_t i = 0; i < vals.size(); ++i)
            restricted.prices(static_cast<Eigen::Index>(i), 0) = vals[i];
        const auto solo = log_returns(restricted);
        REQUIRE(solo.rows() == joint_rets.rows());
        for (Eigen::Index t = 0; t < solo.rows(); ++t)
            CHECK(solo.returns(t, 0) == joint_rets.returns(t, which));
    }
}

TEST_CASE("simulate fixture survives a CSV round trip") {
    const auto prices = simulate_demo_prices(42, 120);
    const std::string csv = price_csv(prices);
    std::istringstream in(csv);
    const auto reloaded = load_price_series(in);
    CHECK(reloaded.rows() == prices.rows());
    CHECK(reloaded.assets == prices.assets);
    for (Eigen::Index t = 0; t < prices.rows(); ++t)
        for (Eigen::Index kk = 0; kk < prices.cols(); ++kk)
            CHECK(reloaded.prices(t, kk) ==
                  doctest::Approx(prices.prices(t, kk)).epsilon(1e-11));
}
