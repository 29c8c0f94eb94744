#pragma once

#include <string>
#include <vector>

#include "wflo/farm.hpp"

namespace wflo {

/// North Sea regime used by windfarms A and B (12 arrangements).
WindRegime north_sea_regime();
/// Alltwalis regime, normalized on construction (the raw table sums to 0.99).
WindRegime alltwalis_regime();
/// 36 directions every 10 degrees at 12 m/s, equal probability.
WindRegime mosetti_swr_regime();

TurbineSpec windfarm_ab_turbine();
TurbineSpec alltwalis_turbine();

/// Avoidance vector bundled with the Alltwalis preset for L in {7,8,9}.
std::vector<double> alltwalis_avoidance(int side_count);

/// Reads a P-vector file: N whitespace-separated values in site order.
std::vector<double> read_avoidance_file(const std::string& path);

/// Names: windfarm_a (L 4/7/9), windfarm_b (L 7/9), alltwalis (L 7/8/9),
/// mosetti_swr (any L >= 2, windfarm A geometry). Throws ConfigError otherwise.
FarmProblem load_preset(const std::string& name, int side_count, double lambda = 200.0);

std::vector<std::string> preset_names();
std::vector<int> preset_sizes(const std::string& name);

}  // namespace wflo
