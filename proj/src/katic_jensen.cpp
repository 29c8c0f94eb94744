#include "wflo/katic_jensen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wflo {

namespace {

// Circular segment of radius r cut by the chord whose half-angle satisfies
// cos(alpha) = cos_alpha: r^2 * (2 alpha - sin 2 alpha) / 2.
double segment(double r, double cos_alpha) {
  const double alpha = std::acos(std::clamp(cos_alpha, -1.0, 1.0));
  return 0.5 * r * r * (2.0 * alpha - std::sin(2.0 * alpha));
}

}  // namespace

double kj_partial_overlap_area(double rotor_radius, double wake_radius, double center_offset) {
  if (!(rotor_radius > 0.0) || !(wake_radius > 0.0))
    throw std::domain_error("radii must be positive");
  if (center_offset < 0.0) throw std::domain_error("centre offset must be >= 0");

  const double rt = rotor_radius;
  const double rw = wake_radius;
  const double d = center_offset;
  if (d >= rt + rw) return 0.0;
  if (d + rt <= rw) return std::numbers::pi * rt * rt;
  if (d + rw <= rt) return std::numbers::pi * rw * rw;

  return segment(rw, (rw * rw + d * d - rt * rt) / (2.0 * rw * d)) +
         segment(rt, (rt * rt + d * d - rw * rw) / (2.0 * rt * d));
}

double kj_interference(const TurbineSpec& turbine, double free_speed, const Interferer& k) {
  if (!(k.downwind > 0.0)) throw std::domain_error("interferer must be strictly upwind");
  const double ct = thrust_coefficient(turbine, free_speed);
  const double rt = turbine.rotor_radius;
  const double decay = 1.0 + turbine.wake_expansion * k.downwind / rt;
  const double area_ratio =
      kj_partial_overlap_area(rt, wake_radius(turbine, k.downwind), std::abs(k.crosswind)) /
      (std::numbers::pi * rt * rt);
  return (1.0 - std::sqrt(1.0 - ct)) / (decay * decay) * area_ratio;
}

double kj_waked_speed(const TurbineSpec& turbine, double free_speed,
                      const std::vector<Interferer>& interferers) {
  double sum_sq = 0.0;
  for (const auto& k : interferers) {
    const double u = kj_interference(turbine, free_speed, k);
    sum_sq += u * u;
  }
  return std::max(0.0, free_speed * (1.0 - std::sqrt(sum_sq)));
}

}  // namespace wflo
