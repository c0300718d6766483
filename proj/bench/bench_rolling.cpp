// Serial reference vs OpenMP rolling engine, plus the attribution and
// Kendall kernels that dominate a window.

#include <benchmark/benchmark.h>

#include "spillover/connectedness.hpp"
#include "spillover/correlation.hpp"
#include "spillover/relative_weights.hpp"
#include "spillover/rng.hpp"
#include "spillover/simulate.hpp"

using namespace spillover;

namespace {

ReturnPanel bench_panel() {
    static const ReturnPanel panel = log_returns(simulate_demo_prices(42, 601));
    return panel;
}

RollingConfig bench_config(CorrMethod method) {
    RollingConfig cfg;
    cfg.window = 200;
    cfg.step = 2;
    cfg.decompose.method = method;
    return cfg;
}

}  // namespace

static void BM_RollingSerial(benchmark::State& state) {
    const auto panel = bench_panel();
    const auto cfg = bench_config(CorrMethod::pearson);
    for (auto _ : state) {
        auto results = rolling_connectedness_serial(panel, cfg);
        benchmark::DoNotOptimize(results);
    }
}
BENCHMARK(BM_RollingSerial)->Unit(benchmark::kMillisecond);

static void BM_RollingParallel(benchmark::State& state) {
    const auto panel = bench_panel();
    const auto cfg = bench_config(CorrMethod::pearson);
    for (auto _ : state) {
        auto results = rolling_connectedness_parallel(panel, cfg);
        benchmark::DoNotOptimize(results);
    }
}
BENCHMARK(BM_RollingParallel)->Unit(benchmark::kMillisecond);

static void BM_RollingParallelKendall(benchmark::State& state) {
    const auto panel = bench_panel();
    const auto cfg = bench_config(CorrMethod::kendall);
    for (auto _ : state) {
        auto results = rolling_connectedness_parallel(panel, cfg);
        benchmark::DoNotOptimize(results);
    }
}
BENCHMARK(BM_RollingParallelKendall)->Unit(benchmark::kMillisecond);

static void BM_DecomposeWindow(benchmark::State& state) {
    const auto panel = bench_panel();
    const Eigen::MatrixXd window = panel.returns.topRows(200);
    DecomposeOptions opts;
    for (auto _ : state) {
        auto spill = decompose_window(window, panel.assets, opts);
        benchmark::DoNotOptimize(spill);
    }
}
BENCHMARK(BM_DecomposeWindow)->Unit(benchmark::kMicrosecond);

static void BM_RelativeWeights(benchmark::State& state) {
    Rng rng(1);
    const auto n = static_cast<Eigen::Index>(state.range(0));
    Eigen::MatrixXd x(250, n);
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < n; ++j) x(i, j) = rng.normal();
    Eigen::VectorXd y(250);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = rng.normal() + x(i, 0);
    for (auto _ : state) {
        auto shares = relative_weights(x, y);
        benchmark::DoNotOptimize(shares);
    }
}
BENCHMARK(BM_RelativeWeights)->Arg(5)->Arg(17)->Unit(benchmark::kMicrosecond);

static void BM_KendallTau(benchmark::State& state) {
    Rng rng(2);
    std::vector<double> x(500), y(500);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = rng.normal();
        y[i] = 0.3 * x[i] + rng.normal();
    }
    for (auto _ : state) {
        double tau = kendall_tau_b(x, y);
        benchmark::DoNotOptimize(tau);
    }
}
BENCHMARK(BM_KendallTau)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
