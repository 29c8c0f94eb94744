#include "wflo/presets.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "preset_data.hpp"
#include "wflo/errors.hpp"

namespace wflo {

namespace {

std::vector<double> parse_values(std::istream& in) {
  std::vector<double> out;
  double v = 0.0;
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw ConfigError("malformed P-vector data");
  return out;
}

}  // namespace

WindRegime north_sea_regime() {
  return WindRegime({{0, 9.77, 0.063},
                     {30, 8.34, 0.059},
                     {60, 7.93, 0.055},
                     {90, 10.18, 0.078},
                     {120, 8.14, 0.083},
                     {150, 8.24, 0.065},
                     {180, 9.05, 0.114},
                     {210, 11.59, 0.146},
                     {240, 12.11, 0.121},
                     {270, 11.90, 0.085},
                     {300, 10.38, 0.064},
                     {330, 8.14, 0.067}});
}

WindRegime alltwalis_regime() {
  return WindRegime({{0, 4.65, 0.08},
                     {30, 1.55, 0.03},
                     {60, 1.55, 0.04},
                     {90, 4.65, 0.07},
                     {120, 3.10, 0.05},
                     {150, 6.20, 0.08},
                     {180, 7.97, 0.12},
                     {210, 9.30, 0.14},
                     {240, 7.97, 0.12},
                     {270, 4.65, 0.08},
                     {300, 6.20, 0.09},
                     {330, 6.20, 0.09}})
      .normalized();
}

WindRegime mosetti_swr_regime() {
  std::vector<WindArrangement> a;
  for (int k = 0; k < 36; ++k) a.push_back({10.0 * k, 12.0, 1.0 / 36.0});
  return WindRegime(std::move(a));
}

TurbineSpec windfarm_ab_turbine() {
  TurbineSpec t;
  t.rotor_radius = 82.0;
  t.hub_height = 107.0;
  t.wake_expansion = 0.094;
  t.thrust_table = {{4, 0.7000000000}, {5, 0.722386304},  {6, 0.773588333},  {7, 0.773285946},
                    {8, 0.767899317},  {9, 0.732727569},  {10, 0.688896343}, {11, 0.623028669},
                    {12, 0.500046699}, {13, 0.373661747}, {14, 0.293230676}, {15, 0.238407400},
                    {16, 0.196441644}, {17, 0.163774674}, {18, 0.137967245}, {19, 0.117309371},
                    {20, 0.100578122}, {21, 0.086883163}, {22, 0.075565832}, {23, 0.066131748},
                    {24, 0.058204932}, {25, 0.051495998}};
  return t;
}

TurbineSpec alltwalis_turbine() {
  TurbineSpec t;
  t.rotor_radius = 46.5;
  t.hub_height = 90.0;
  t.wake_expansion = 0.154;
  t.thrust_table = {{2.5, 0.85},  {3.75, 0.85}, {5.0, 0.82},   {6.25, 0.82}, {7.5, 0.82},
                    {8.75, 0.82}, {10.0, 0.8},  {11.25, 0.62}, {12.5, 0.4},  {13.75, 0.3},
                    {15.0, 0.2},  {16.25, 0.15}, {17.5, 0.1},  {18.75, 0.08}, {20.0, 0.05}};
  return t;
}

std::vector<double> alltwalis_avoidance(int side_count) {
  const char* text = nullptr;
  switch (side_count) {
    case 7: text = preset_data::kAlltwalisP7; break;
    case 8: text = preset_data::kAlltwalisP8; break;
    case 9: text = preset_data::kAlltwalisP9; break;
    default: throw ConfigError("no Alltwalis P-vector for L=" + std::to_string(side_count));
  }
  std::istringstream in(text);
  auto p = parse_values(in);
  if (static_cast<int>(p.size()) != side_count * side_count)
    throw ConfigError("bundled P-vector has the wrong length");
  return p;
}

std::vector<double> read_avoidance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open P-vector file " + path);
  return parse_values(in);
}

std::vector<std::string> preset_names() {
  return {"windfarm_a", "windfarm_b", "alltwalis", "mosetti_swr"};
}

std::vector<int> preset_sizes(const std::string& name) {
  if (name == "windfarm_a") return {4, 7, 9};
  if (name == "windfarm_b") return {7, 9};
  if (name == "alltwalis") return {7, 8, 9};
  if (name == "mosetti_swr") return {};
  throw ConfigError("unknown preset '" + name + "'");
}

FarmProblem load_preset(const std::string& name, int side_count, double lambda) {
  const auto sizes = preset_sizes(name);
  const bool any_size = name == "mosetti_swr";
  if (any_size ? side_count < 2
               : std::find(sizes.begin(), sizes.end(), side_count) == sizes.end())
    throw ConfigError("preset '" + name + "' does not support L=" + std::to_string(side_count));

  FarmProblem p;
  p.name = name;
  p.weights = ConstraintWeights::uniform(lambda);
  p.grid.side_count = side_count;
  if (name == "windfarm_a" || name == "mosetti_swr") {
    p.grid.side_length = 3940.0;
    p.turbine = windfarm_ab_turbine();
    p.regime = name == "windfarm_a" ? north_sea_regime() : mosetti_swr_regime();
    p.max_turbines = std::min(16, side_count * side_count);
  } else if (name == "windfarm_b") {
    p.grid.side_length = 7872.0;
    p.turbine = windfarm_ab_turbine();
    p.regime = north_sea_regime();
    p.max_turbines = 49;
  } else {
    p.grid.side_length = 1581.13;
    p.turbine = alltwalis_turbine();
    p.regime = alltwalis_regime();
    p.max_turbines = 10;
    p.min_spacing = 465.0;
    p.avoidance = alltwalis_avoidance(side_count);
  }
  p.validate();
  return p;
}

}  // namespace wflo
