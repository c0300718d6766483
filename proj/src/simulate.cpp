#include "spillover/simulate.hpp"

#include <cmath>
#include <cstdio>

#include "spillover/errors.hpp"
#include "spillover/rng.hpp"

namespace spillover {

namespace {

Date fixture_start() { return Date::from_ymd(2021, 5, 25); }

}  // namespace

PricePanel simulate_demo_prices(std::uint64_t seed, int rows, int assets) {
    if (assets != 9) throw config_error("demo fixture is defined for 9 assets");
    if (rows < 50) throw config_error("demo fixture needs at least 50 rows");
    const int k = assets;
    const int t_total = rows;

    // Column layout: 2 fund-style, 5 token-style, bond, clean energy.
    const std::vector<std::string> names = {"etf_a", "etf_b", "tok_a", "tok_b", "tok_c",
                                            "tok_d", "tok_e", "bond",  "clean"};
    const double common_load[9] = {0.9, 0.9, 0.8, 0.8, 0.8, 0.8, 0.8, 0.20, 0.7};
    const double group_load[9] = {0.8, 0.8, 1.1, 1.1, 1.1, 1.1, 1.1, 0.30, 0.6};
    const double idio_scale[9] = {0.5, 0.5, 1.6, 1.6, 1.6, 1.6, 1.6, 0.55, 0.7};
    // group index: 0 = fund/clean block, 1 = token block, 2 = bond
    const int group_of[9] = {0, 0, 1, 1, 1, 1, 1, 2, 0};
    const double vol[9] = {0.011, 0.011, 0.055, 0.055, 0.055, 0.055, 0.055, 0.004, 0.013};
    const double drift[9] = {2e-4, 2e-4, 5e-4, -3e-4, -3e-4, 4e-4, 6e-4, -1e-4, -2e-4};

    Rng rng(seed);
    Eigen::MatrixXd returns(t_total - 1, k);
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(k);
    for (int t = 0; t + 1 < t_total; ++t) {
        const double phase =
            (static_cast<double>(t) - 0.55 * t_total) / (0.08 * t_total);
        const double coupling = 0.45 + 0.45 / (1.0 + std::exp(-phase));
        const double g = rng.normal();
        const double grp[3] = {rng.normal(), rng.normal(), rng.normal()};
        Eigen::VectorXd r(k);
        for (int i = 0; i < k; ++i) {
            double shock = coupling * common_load[i] * g + group_load[i] * grp[group_of[i]] +
                           idio_scale[i] * rng.normal();
            // One-day spillover out of the fund block into tokens and bond.
            double lag_term = 0.05 * prev(i);
            if (i >= 2 && i <= 6) lag_term += 0.22 * prev(0);
            if (i == 7) lag_term += 0.12 * prev(1);
            r(i) = drift[i] + vol[i] * shock + lag_term;
        }
        returns.row(t) = r.transpose();
        prev = r;
    }

    PricePanel panel;
    panel.assets = names;
    panel.prices.resize(t_total, k);
    Date d = fixture_start();
    for (int t = 0; t < t_total; ++t) {
        panel.dates.push_back(d);
        d = d.next_day();
    }
    for (int i = 0; i < k; ++i) {
        double level = 100.0 * (1.0 + i);
        panel.prices(0, i) = level;
        for (int t = 1; t < t_total; ++t) {
            level *= std::exp(returns(t - 1, i));
            panel.prices(t, i) = level;
        }
    }
    return panel;
}

ReturnPanel simulate_planted_var1(std::uint64_t seed, int rows) {
    Rng rng(seed);
    ReturnPanel panel;
    panel.assets = {"driver", "follower_a", "follower_b"};
    panel.returns.resize(rows, 3);
    Date d = fixture_start();
    Eigen::Vector3d prev = Eigen::Vector3d::Zero();
    for (int t = 0; t < rows; ++t) {
        const double e0 = rng.normal();
        const double e1 = rng.normal();
        const double e2 = rng.normal();
        Eigen::Vector3d r;
        r(0) = 0.10 * prev(0) + e0;
        r(1) = 0.35 * prev(0) + 0.70 * e0 + 0.45 * e1;
        r(2) = 0.35 * prev(0) + 0.70 * e0 + 0.45 * e2;
        panel.returns.row(t) = r.transpose();
        panel.dates.push_back(d);
        d = d.next_day();
        prev = r;
    }
    return panel;
}

std::vector<double> simulate_garch11(std::uint64_t seed, int n, double omega, double alpha,
                                     double beta) {
    if (!(alpha + beta < 1.0)) throw config_error("garch simulation needs alpha+beta<1");
    Rng rng(seed);
    const int burn = 200;
    double h = omega / (1.0 - alpha - beta);
    double r = std::sqrt(h) * rng.normal();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int t = 1; t < n + burn; ++t) {
        h = omega + alpha * r * r + beta * h;
        r = std::sqrt(h) * rng.normal();
        if (t >= burn) out.push_back(r);
    }
    return out;
}

ReturnPanel simulate_constant_correlation(std::uint64_t seed, int rows, int assets, double rho) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw config_error("constant-correlation simulation: rho must be in [0,1)");
    Rng rng(seed);
    ReturnPanel panel;
    for (int i = 0; i < assets; ++i) panel.assets.push_back("asset_" + std::to_string(i));
    panel.returns.resize(rows, assets);
    Date d = fixture_start();
    // One-factor representation gives the exchangeable correlation exactly.
    const double a = std::sqrt(rho);
    const double b = std::sqrt(1.0 - rho);
    for (int t = 0; t < rows; ++t) {
        const double f = rng.normal();
        for (int i = 0; i < assets; ++i)
            panel.returns(t, i) = 0.01 * (a * f + b * rng.normal());
        panel.dates.push_back(d);
        d = d.next_day();
    }
    return panel;
}

std::string price_csv(const PricePanel& panel) {
    std::string out = "date";
    for (const auto& a : panel.assets) out += "," + a;
    out += '\n';
    char buf[40];
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
        out += panel.dates[static_cast<std::size_t>(t)].to_string();
        for (Eigen::Index k = 0; k < panel.cols(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.12g", panel.prices(t, k));
            out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

}  // namespace spillover
