#pragma once

#include <vector>

#include "wflo/farm.hpp"

namespace wflo {

/// Area of a rotor disc (radius r_t) covered by a wake disc (radius r_w)
/// whose centres are `center_offset` apart.
double kj_partial_overlap_area(double rotor_radius, double wake_radius, double center_offset);

struct Interferer {
  double downwind = 0.0;   // m, > 0
  double crosswind = 0.0;  // m, centre offset of the wake axis from the rotor
};

/// Single-interferer deficit U_kj, weighted by the rotor area fraction inside the wake.
double kj_interference(const TurbineSpec& turbine, double free_speed, const Interferer& k);

/// Root-sum-square combination of all interferers; clamped at zero speed.
double kj_waked_speed(const TurbineSpec& turbine, double free_speed,
                      const std::vector<Interferer>& interferers);

}  // namespace wflo
