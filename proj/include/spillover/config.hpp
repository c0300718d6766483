#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spillover/correlation.hpp"
#include "spillover/panel.hpp"
#include "spillover/portfolio.hpp"

namespace spillover {

/// Effective pipeline configuration. Every field has a default; the
/// post-default document is echoed verbatim into each output bundle.
struct RunConfig {
    std::vector<std::string> inputs;       // price CSV paths
    std::string date_column = "date";
    AlignPolicy align = AlignPolicy::intersection;

    int window = 200;
    int step = 1;
    int lag = 1;
    CorrMethod corr_method = CorrMethod::pearson;
    bool include_own_lag = false;
    double network_threshold = 0.05;

    std::string estimator = "ewma";        // "ewma" | "dcc"
    double ewma_lambda = 0.94;
    int ewma_burn_in = 60;

    std::vector<Strategy> strategies = {Strategy::mvp, Strategy::mcp, Strategy::mcop,
                                        Strategy::mcop_c, Strategy::mcop_l};
    double alpha = 0.05;
    bool long_only = true;
    bool annualize = true;

    int ers_lag = -1;                      // -1 = Schwert rule
    double mask_level = 0.10;

    std::string output_dir = "out";
    std::uint64_t seed = 42;

    /// Canonical TOML rendering of the effective configuration.
    std::string to_toml() const;
    std::string to_json() const;
};

/// Parse a TOML document (flat key = value subset: strings, integers,
/// floats, booleans and string arrays; '#' comments). All validation
/// errors are collected and reported together; unknown keys carry a
/// nearest-key suggestion.
RunConfig validate_config(const std::string& toml_text);

RunConfig load_config_file(const std::string& path);

}  // namespace spillover
