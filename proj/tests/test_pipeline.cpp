#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "spillover/errors.hpp"
#include "spillover/pipeline.hpp"
#include "spillover/simulate.hpp"
#include "spillover/textio.hpp"

using namespace spillover;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

RunConfig fixture_config(const TempDir& dir, int rows, int window) {
    const fs::path csv = dir.path / "prices.csv";
    write_file(csv.string(), price_csv(simulate_demo_prices(42, rows)));
    RunConfig cfg = validate_config("");
    cfg.inputs = {csv.string()};
    cfg.window = window;
    cfg.step = 5;
    cfg.ewma_burn_in = 40;
    cfg.ers_lag = 4;
    cfg.output_dir = (dir.path / "out").string();
    return cfg;
}

std::set<std::string> manifest_paths(const std::string& dir) {
    const std::string manifest = read_file(dir + "/manifest.json");
    std::set<std::string> paths;
    std::size_t pos = 0;
    while ((pos = manifest.find("\"path\": \"", pos)) != std::string::npos) {
        pos += 9;
        const auto end = manifest.find('"', pos);
        paths.insert(manifest.substr(pos, end - pos));
        pos = end;
    }
    return paths;
}

}  // namespace

TEST_CASE("run_pipeline produces a complete, deterministic bundle") {
    TempDir dir("spillover_pipeline_test");
    const RunConfig cfg = fixture_config(dir, 400, 120);

    run_pipeline(cfg);
    const auto paths = manifest_paths(cfg.output_dir);
    CHECK(paths.size() >= 12);
    for (const char* expected :
         {"table1.csv", "correlation.csv", "correlation_heatmap.svg", "averaged_overall.csv",
          "averaged_contemporaneous.csv", "averaged_lagged.csv", "averaged_indices.csv",
          "rolling_indices.csv", "npdc.csv", "network_overall.dot", "network_overall.graphml",
          "covariance.csv", "hedge_ratios.csv", "bilateral_weights.csv", "table3.csv",
          "table4.csv", "cumulative_returns.csv", "cumulative_returns.svg"})
        CHECK(paths.count(expected) == 1);

    const std::string first_manifest = read_file(cfg.output_dir + "/manifest.json");
    const std::string first_table4 = read_file(cfg.output_dir + "/table4.csv");

    run_pipeline(cfg);  // rerun into the same directory
    CHECK(read_file(cfg.output_dir + "/manifest.json") == first_manifest);
    CHECK(read_file(cfg.output_dir + "/table4.csv") == first_table4);
}

TEST_CASE("pipeline failures name the stage and clean up partial outputs") {
    TempDir dir("spillover_pipeline_fail");
    RunConfig cfg = fixture_config(dir, 150, 500);  // window larger than the panel

    try {
        run_pipeline(cfg);
        FAIL("expected data_error");
    } catch (const data_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("stage connectedness") != std::string::npos);
        CHECK(msg.find("window too short") != std::string::npos);
    }
    // Stats artifacts were written before the failing stage, then removed.
    CHECK(!fs::exists(fs::path(cfg.output_dir) / "table1.csv"));
    CHECK(!fs::exists(fs::path(cfg.output_dir) / "manifest.json"));
    // The lock is released, so a corrected run succeeds.
    cfg.window = 100;
    run_pipeline(cfg);
    CHECK(fs::exists(fs::path(cfg.output_dir) / "manifest.json"));
}

TEST_CASE("a single strategy produces a single strategy column in table 4") {
    TempDir dir("spillover_pipeline_single");
    RunConfig cfg = fixture_config(dir, 300, 100);
    cfg.strategies = {Strategy::mvp};
    run_pipeline(cfg);

    std::ifstream in(cfg.output_dir + "/table4.csv");
    std::string line;
    std::getline(in, line);  // config echo
    std::getline(in, line);  // header
    CHECK(line == "metric,mvp");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 5);
}

TEST_CASE("the output directory lock is exclusive") {
    TempDir dir("spillover_lock_test");
    RunConfig cfg = validate_config("");
    cfg.output_dir = (dir.path / "out").string();
    Bundle first(cfg.output_dir, cfg);
    CHECK_THROWS_WITH_AS(Bundle(cfg.output_dir, cfg), doctest::Contains("locked"), data_error);
}

TEST_CASE("missing inputs fail before any stage runs") {
    RunConfig cfg = validate_config("");
    CHECK_THROWS_AS(load_inputs(cfg), config_error);
    cfg.inputs = {"/nonexistent/file.csv"};
    CHECK_THROWS_AS(load_inputs(cfg), data_error);
}

TEST_CASE("bundle artifacts embed the config echo") {
    TempDir dir("spillover_echo_test");
    const RunConfig cfg = fixture_config(dir, 300, 100);
    run_pipeline(cfg);
    for (const char* name : {"table1.csv", "rolling_indices.csv", "table3.csv"}) {
        const std::string content = read_file(cfg.output_dir + "/" + name);
        CHECK(content.rfind("# config sha256=", 0) == 0);
        CHECK(content.find("window=100") != std::string::npos);
    }
    const std::string dot = read_file(cfg.output_dir + "/network_overall.dot");
    CHECK(dot.find("config sha256=") != std::string::npos);
}
