// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cbr/specio.hpp"

namespace cbr {

/// Share-price chain for r time series: 12 hours of per-minute prices,
/// hourly sampling (5-minute points), line plots, observed features, a
/// pairwise-correlation branch and a buy/sell/hold decision per series.
/// Evaluated in maximal-entropy mode.
WorkflowSpec fixture_fig2(std::uint64_t r);

enum class Fig4View { plot, binary, presenter };

/// One 60-point series shown as a time series plot or as a binary digits
/// view, then read for two features and a decision. Human costs and
/// distortions are declared estimates. The presenter view models someone
/// who already knows the answer.
WorkflowSpec fixture_fig4(Fig4View view);

std::vector<std::string> fixture_names();

/// Built-in fixture by name; unknown names raise dangling_reference.
Fixture fixture(std::string_view name);

}  // namespace cbr
