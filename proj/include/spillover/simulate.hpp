#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spillover/panel.hpp"

namespace spillover {

/// Deterministic 9-asset daily price fixture: two tightly coupled
/// equity-fund style series, five volatile token-style series, a quiet
/// bond-style series and a clean-energy style series. A smooth rise in the
/// common-factor loading over the middle of the sample gives the rolling
/// connectedness measures genuine dynamics.
PricePanel simulate_demo_prices(std::uint64_t seed, int rows, int assets = 9);

/// 3-asset system where asset 0 drives assets 1 and 2 both
/// contemporaneously and with one day of lag; used to check
/// transmitter/receiver recovery.
ReturnPanel simulate_planted_var1(std::uint64_t seed, int rows);

/// GARCH(1,1) return series with Gaussian innovations, burn-in discarded.
std::vector<double> simulate_garch11(std::uint64_t seed, int n, double omega, double alpha,
                                     double beta);

/// Multivariate returns with constant correlation rho and constant
/// per-asset volatility; the null case for DCC dynamics.
ReturnPanel simulate_constant_correlation(std::uint64_t seed, int rows, int assets, double rho);

/// CSV serialization of a price panel (the `simulate` subcommand output,
/// loadable by the ingest path).
std::string price_csv(const PricePanel& panel);

}  // namespace spillover
