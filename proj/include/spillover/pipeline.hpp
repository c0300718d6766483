#pragma once

#include "spillover/report.hpp"

namespace spillover {

/// Load, align and difference the configured inputs.
ReturnPanel load_inputs(const RunConfig& config);

// Pipeline stages. Each writes its artifacts plus a metadata sidecar into
// the bundle; the orchestrator (and the single-stage CLI subcommands) wire
// them together.
void stage_stats(const ReturnPanel& panel, const RunConfig& config, Bundle& bundle);
std::vector<WindowResult> stage_connectedness(const ReturnPanel& panel, const RunConfig& config,
                                              Bundle& bundle);
ConditionalCovariances stage_covariance(const ReturnPanel& panel, const RunConfig& config,
                                        Bundle& bundle);
void stage_hedge(const ReturnPanel& panel, const ConditionalCovariances& cov,
                 const RunConfig& config, Bundle& bundle);
void stage_portfolio(const ReturnPanel& panel, const ConditionalCovariances& cov,
                     const std::vector<WindowResult>& rolling, const RunConfig& config,
                     Bundle& bundle);

/// Full deterministic pipeline: ingest -> stats -> connectedness ->
/// covariance -> hedge -> portfolio -> manifest. A stage failure removes
/// the partial outputs and rethrows annotated with the stage name.
void run_pipeline(const RunConfig& config);

}  // namespace spillover
