#include <doctest.h>

#include <cmath>

#include "spillover/connectedness.hpp"
#include "spillover/errors.hpp"
#include "spillover/portfolio.hpp"
#include "spillover/rng.hpp"
#include "spillover/series_stats.hpp"
#include "test_support.hpp"

using namespace spillover;

namespace {

Eigen::MatrixXd equicorrelated(int k, double rho) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(k, k, rho);
    m.diagonal().setOnes();
    return m;
}

MatrixSequence constant_sequence(const std::vector<Date>& dates, const Eigen::MatrixXd& m) {
    MatrixSequence seq;
    seq.dates = dates;
    seq.matrices.assign(dates.size(), m);
    return seq;
}

}  // namespace

TEST_CASE("mvp_weights: identity, diagonal, and equicorrelated inputs") {
    SUBCASE("identity gives exactly equal weights") {
        const auto w = mvp_weights(Eigen::MatrixXd::Identity(4, 4));
        for (int i = 0; i < 4; ++i) CHECK(w(i) == 0.25);
    }
    SUBCASE("diag(1,4) weights by inverse variance") {
        Eigen::MatrixXd sigma = Eigen::Vector2d(1.0, 4.0).asDiagonal();
        const auto w = mvp_weights(sigma);
        CHECK(w(0) == 0.8);
        CHECK(w(1) == 0.2);
    }
    SUBCASE("equicorrelated unit variances give exactly equal weights") {
        const auto w = mvp_weights(equicorrelated(4, 0.5));
        CHECK(w(0) == w(1));
        CHECK(w(1) == w(2));
        CHECK(w(2) == w(3));
        CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("singular matrix falls back to the ridge and stays finite") {
        Eigen::MatrixXd singular = Eigen::MatrixXd::Ones(3, 3);
        const auto w = mvp_weights(singular);
        CHECK(std::isfinite(w.sum()));
        CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("mcp_weights: correlation-driven allocations") {
    SUBCASE("any diagonal covariance gives equal weights") {
        Eigen::MatrixXd sigma = Eigen::Vector3d(1.0, 9.0, 0.25).asDiagonal();
        const auto w = mcp_weights(sigma);
        CHECK(w(0) == w(1));
        CHECK(w(1) == w(2));
    }
    SUBCASE("two assets with rho=0.5 split evenly") {
        Eigen::MatrixXd sigma(2, 2);
        sigma << 4.0, 0.5 * 2.0 * 3.0, 0.5 * 2.0 * 3.0, 9.0;
        const auto w = mcp_weights(sigma);
        CHECK(w(0) == 0.5);
        CHECK(w(1) == 0.5);
    }
    SUBCASE("the uncorrelated third asset gets the largest weight") {
        Eigen::MatrixXd corr(3, 3);
        corr << 1.0, 0.8, 0.0, 0.8, 1.0, 0.0, 0.0, 0.0, 1.0;
        const auto w = mcp_weights(corr);
        CHECK(w(0) == w(1));
        CHECK(w(2) > w(0));
        // closed form: x = (1/1.8, 1/1.8, 1), so w3 = 1.8/3.8
        CHECK(w(2) == doctest::Approx(1.8 / 3.8).epsilon(1e-14));
    }
}

TEST_CASE("mcp weights ignore rescaling of one asset while mvp weights do not") {
    Rng rng(601);
    Eigen::MatrixXd sigma = testsupport::random_psd(rng, 3);
    Eigen::MatrixXd scaled = sigma;
    scaled.row(1) *= 3.0;
    scaled.col(1) *= 3.0;  // asset 1 returns scaled by 3
    const auto mcp_a = mcp_weights(sigma);
    const auto mcp_b = mcp_weights(scaled);
    CHECK((mcp_a - mcp_b).cwiseAbs().maxCoeff() < 1e-12);
    const auto mvp_a = mvp_weights(sigma, false);
    const auto mvp_b = mvp_weights(scaled, false);
    CHECK((mvp_a - mvp_b).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("mcop_weights: connectedness-driven allocations") {
    SUBCASE("identity matrix gives equal weights") {
        const auto w = mcop_weights(Eigen::MatrixXd::Identity(3, 3));
        CHECK(w(0) == w(1));
        CHECK(w(1) == w(2));
    }
    SUBCASE("uniform off-diagonals give equal weights") {
        const auto w = mcop_weights(equicorrelated(5, 0.2));
        for (int i = 1; i < 5; ++i) CHECK(w(i) == w(0));
    }
    SUBCASE("the asset outside the connected pair dominates") {
        Eigen::MatrixXd pci(3, 3);
        pci << 1.0, 0.9, 0.1, 0.9, 1.0, 0.1, 0.1, 0.1, 1.0;
        const auto w = mcop_weights(pci);
        CHECK(w(2) > w(0));
        CHECK(w(2) > w(1));
    }
}

TEST_CASE("long-only clipping removes shorts and renormalizes") {
    // Strong correlation with unequal variances shorts the riskier asset.
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.0, 1.4, 1.4, 2.0;
    const auto raw = mvp_weights(sigma, false);
    CHECK(raw.minCoeff() < 0.0);
    CHECK(raw.sum() == doctest::Approx(1.0).epsilon(1e-12));
    const auto clipped = mvp_weights(sigma, true);
    CHECK(clipped.minCoeff() == 0.0);
    CHECK(clipped.maxCoeff() == 1.0);
}

TEST_CASE("mvp solution is the in-sample variance minimizer") {
    Rng rng(607);
    for (int rep = 0; rep < 200; ++rep) {
        const Eigen::MatrixXd sigma = testsupport::random_psd(rng, 4);
        const auto w = mvp_weights(sigma, false);
        const double port_var = w.dot(sigma * w);
        CHECK(port_var <= sigma.diagonal().minCoeff() + 1e-10);
        // random sum-one competitor
        Eigen::VectorXd competitor = testsupport::random_matrix(rng, 4, 1).col(0);
        competitor /= competitor.sum();
        if (std::isfinite(competitor.sum()) && std::abs(competitor.sum() - 1.0) < 1e-9)
            CHECK(port_var <= competitor.dot(sigma * competitor) + 1e-10);
    }
}

TEST_CASE("mcop variants coincide when the lagged matrix vanishes") {
    Rng rng(611);
    SpilloverDecomposition spill;
    spill.contemporaneous = 30.0 * testsupport::random_matrix(rng, 4, 4).cwiseAbs();
    spill.contemporaneous.diagonal().setZero();
    spill.lagged = Eigen::MatrixXd::Zero(4, 4);

    const auto total = pci_matrix(spill, PciVariant::total);
    const auto conly = pci_matrix(spill, PciVariant::contemporaneous);
    CHECK((total - conly).cwiseAbs().maxCoeff() == 0.0);
    const auto w_total = mcop_weights(total);
    const auto w_conly = mcop_weights(conly);
    CHECK((w_total - w_conly).cwiseAbs().maxCoeff() == 0.0);

    // The lagged variant degenerates to the floored identity: equal weights.
    const auto w_lonly = mcop_weights(pci_matrix(spill, PciVariant::lagged));
    for (int i = 1; i < 4; ++i) CHECK(w_lonly(i) == w_lonly(0));
}

TEST_CASE("run_strategy: constant covariance keeps weights constant") {
    Rng rng(613);
    const auto panel = testsupport::gaussian_panel(rng, 60, 3, 0.01);
    const Eigen::MatrixXd sigma = testsupport::random_psd(rng, 3);
    const auto seq = constant_sequence(
        std::vector<Date>(panel.dates.begin(), panel.dates.end() - 1), sigma);
    const auto run = run_strategy(panel, seq, Strategy::mvp);
    REQUIRE(run.weights.rows() == 59);
    for (Eigen::Index t = 1; t < run.weights.rows(); ++t)
        CHECK((run.weights.row(t) - run.weights.row(0)).cwiseAbs().maxCoeff() == 0.0);
    // realized return is the fixed convex combination, lagged one day
    const Eigen::VectorXd w = run.weights.row(0).transpose();
    REQUIRE(run.returns.size() == 59);
    for (std::size_t t = 0; t < run.returns.size(); ++t)
        CHECK(run.returns[t] ==
              doctest::Approx(w.dot(panel.returns.row(static_cast<Eigen::Index>(t + 1))
                                        .transpose()))
                  .epsilon(1e-15));
}

TEST_CASE("run_strategy: single-asset panel holds the asset") {
    Rng rng(617);
    const auto panel = testsupport::gaussian_panel(rng, 50, 1, 0.01);
    Eigen::MatrixXd sigma(1, 1);
    sigma << 0.02;
    const auto seq = constant_sequence(
        std::vector<Date>(panel.dates.begin(), panel.dates.end() - 1), sigma);
    const auto run = run_strategy(panel, seq, Strategy::mvp);
    CHECK(run.weights.cwiseAbs().minCoeff() == 1.0);
    for (std::size_t t = 0; t < run.returns.size(); ++t)
        CHECK(run.returns[t] == panel.returns(static_cast<Eigen::Index>(t + 1), 0));
}

TEST_CASE("run_strategy: realized mvp variance beats single assets in sample") {
    Rng rng(619);
    Eigen::MatrixXd chol(3, 3);
    chol << 0.01, 0.0, 0.0, 0.004, 0.009, 0.0, 0.002, 0.003, 0.012;
    ReturnPanel panel;
    panel.assets = {"x", "y", "z"};
    panel.returns.resize(400, 3);
    Date d = Date::from_ymd(2021, 1, 1);
    for (int t = 0; t < 400; ++t) {
        Eigen::Vector3d z(rng.normal(), rng.normal(), rng.normal());
        panel.returns.row(t) = (chol * z).transpose();
        panel.dates.push_back(d);
        d = d.next_day();
    }
    // Full-sample covariance over the realized-return range (rows 1..399).
    const Eigen::MatrixXd tail = panel.returns.bottomRows(399);
    const Eigen::RowVectorXd mu = tail.colwise().mean();
    const Eigen::MatrixXd centered = tail.rowwise() - mu;
    const Eigen::MatrixXd sigma = centered.transpose() * centered / 398.0;

    const auto seq = constant_sequence(
        std::vector<Date>(panel.dates.begin(), panel.dates.end() - 1), sigma);
    const auto run = run_strategy(panel, seq, Strategy::mvp, /*long_only=*/false);
    const double port_var = sample_variance(run.returns);
    for (Eigen::Index k = 0; k < 3; ++k) {
        std::vector<double> asset;
        for (Eigen::Index t = 1; t < 400; ++t) asset.push_back(panel.returns(t, k));
        CHECK(port_var <= sample_variance(asset) + 1e-12);
    }
}

TEST_CASE("run_strategy: weight rows always sum to one") {
    Rng rng(621);
    const auto panel = testsupport::gaussian_panel(rng, 80, 4, 0.01);
    MatrixSequence seq;
    for (std::size_t t = 0; t + 1 < panel.dates.size(); ++t) {
        seq.dates.push_back(panel.dates[t]);
        seq.matrices.push_back(testsupport::random_psd(rng, 4));
    }
    for (auto strat : {Strategy::mvp, Strategy::mcp}) {
        const auto run = run_strategy(panel, seq, strat);
        for (Eigen::Index t = 0; t < run.weights.rows(); ++t) {
            CHECK(std::abs(run.weights.row(t).sum() - 1.0) <= 1e-12);
            CHECK(run.weights.row(t).minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("performance: degenerate and symmetric cases") {
    SUBCASE("constant series has undefined sharpe") {
        const std::vector<double> r(40, 0.01);
        const auto rep = performance(r);
        CHECK(std::isnan(rep.sharpe_std));
        CHECK(rep.stddev == 0.0);
    }
    SUBCASE("alternating plus-minus one percent has zero mean and zero sharpes") {
        std::vector<double> r(40);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = i % 2 ? 0.01 : -0.01;
        const auto rep = performance(r);
        CHECK(rep.mean_return == 0.0);
        CHECK(rep.sharpe_std == 0.0);
        CHECK(rep.sharpe_var == 0.0);
        CHECK(rep.sharpe_cvar == 0.0);
    }
    SUBCASE("all-positive returns mark the tail ratios undefined") {
        std::vector<double> r(40);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = 0.01 + 0.001 * static_cast<double>(i % 5);
        const auto rep = performance(r);
        CHECK(rep.var_alpha <= 0.0);
        CHECK(std::isnan(rep.sharpe_var));
        CHECK(std::isnan(rep.sharpe_cvar));
    }
    SUBCASE("empirical VaR tracks the Gaussian quantile") {
        Rng rng(623);
        std::vector<double> r(1000);
        for (auto& v : r) v = 0.01 * rng.normal();
        const auto rep = performance(r, 0.05);
        CHECK(rep.var_alpha == doctest::Approx(0.01645).epsilon(0.15));
        CHECK(rep.cvar_alpha >= rep.var_alpha);
    }
    SUBCASE("cumulative series starts at zero and accumulates") {
        std::vector<double> r(31, 0.0);
        r[0] = 0.01;
        r[30] = -0.02;
        const auto rep = performance(r, 0.05, false);
        REQUIRE(rep.cumulative.size() == 32);
        CHECK(rep.cumulative[0] == 0.0);
        CHECK(rep.cumulative[1] == doctest::Approx(0.01).epsilon(1e-15));
        CHECK(rep.cumulative[31] == doctest::Approx(-0.01).epsilon(1e-12));
    }
    SUBCASE("annualization scales mean by 252 and sd by sqrt(252)") {
        Rng rng(627);
        std::vector<double> r(500);
        for (auto& v : r) v = 0.01 * rng.normal() + 0.0002;
        const auto ann = performance(r, 0.05, true);
        const auto raw = performance(r, 0.05, false);
        CHECK(ann.mean_return == doctest::Approx(252.0 * raw.mean_return).epsilon(1e-12));
        CHECK(ann.stddev == doctest::Approx(std::sqrt(252.0) * raw.stddev).epsilon(1e-12));
        CHECK(ann.sharpe_std ==
              doctest::Approx(std::sqrt(252.0) * raw.sharpe_std).epsilon(1e-12));
    }
    SUBCASE("input guards") {
        CHECK_THROWS_AS(performance(std::vector<double>(10, 0.01)), data_error);
        CHECK_THROWS_AS(performance(std::vector<double>(40, 0.01), 0.7), config_error);
    }
}

TEST_CASE("portfolio_he: fixed points") {
    Rng rng(631);
    const auto panel = testsupport::gaussian_panel(rng, 80, 2, 0.01);
    StrategyRun run;
    run.strategy = Strategy::mvp;
    run.weight_dates = {panel.dates.front()};
    run.weights = Eigen::MatrixXd::Constant(1, 2, 0.5);
    run.return_dates.assign(panel.dates.begin() + 1, panel.dates.end());

    SUBCASE("portfolio equal to an asset has zero HE for it") {
        for (Eigen::Index t = 1; t < panel.rows(); ++t)
            run.returns.push_back(panel.returns(t, 0));
        const auto he = portfolio_he(run, panel);
        CHECK(he[0].he.he == 0.0);
        CHECK(he[1].asset == "a1");
    }
    SUBCASE("half the variance means HE one half") {
        const double inv_root2 = 1.0 / std::sqrt(2.0);
        for (Eigen::Index t = 1; t < panel.rows(); ++t)
            run.returns.push_back(inv_root2 * panel.returns(t, 0));
        const auto he = portfolio_he(run, panel);
        CHECK(he[0].he.he == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("constant-weight cumulative returns are the weighted asset cumsums") {
    Rng rng(633);
    const auto panel = testsupport::gaussian_panel(rng, 70, 3, 0.01);
    const Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(3, 3);
    const auto seq = constant_sequence(
        std::vector<Date>(panel.dates.begin(), panel.dates.end() - 1), sigma);
    const auto run = run_strategy(panel, seq, Strategy::mvp);
    const auto rep = performance(run.returns, 0.05, false);
    Eigen::Vector3d w = run.weights.row(0).transpose();
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (std::size_t t = 0; t < run.returns.size(); ++t) {
        acc += panel.returns.row(static_cast<Eigen::Index>(t + 1)).transpose();
        CHECK(std::abs(rep.cumulative[t + 1] - w.dot(acc)) <= 1e-12);
    }
}
