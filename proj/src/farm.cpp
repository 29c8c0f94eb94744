#include "wflo/farm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "wflo/errors.hpp"

namespace wflo {

namespace {

double wrap_degrees(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d < 0.0) d += 360.0;
  if (d >= 360.0) d = 0.0;
  return d;
}

// Tolerance on the crosswind test so that exactly aligned sites are not lost
// to rounding in the projection.
constexpr double kConeSlack = 1e-9;

}  // namespace

WindRegime::WindRegime(std::vector<WindArrangement> arrangements)
    : arrangements_(std::move(arrangements)) {
  if (arrangements_.empty()) throw ConfigError("wind regime must not be empty");
  for (auto& a : arrangements_) {
    if (!std::isfinite(a.direction_deg) || !std::isfinite(a.free_speed) ||
        !std::isfinite(a.probability))
      throw ConfigError("wind arrangement has non-finite fields");
    if (a.free_speed < 0.0) throw ConfigError("free windspeed must be >= 0");
    if (a.probability < 0.0 || a.probability > 1.0)
      throw ConfigError("arrangement probability must lie in [0,1]");
    a.direction_deg = wrap_degrees(a.direction_deg);
  }
}

double WindRegime::total_probability() const {
  return std::accumulate(arrangements_.begin(), arrangements_.end(), 0.0,
                         [](double s, const WindArrangement& a) { return s + a.probability; });
}

bool WindRegime::is_normalized(double tol) const {
  return std::abs(total_probability() - 1.0) <= tol;
}

WindRegime WindRegime::normalized() const {
  const double total = total_probability();
  if (total <= 0.0) throw ConfigError("cannot normalize a zero-probability regime");
  auto copy = arrangements_;
  for (auto& a : copy) a.probability /= total;
  return WindRegime(std::move(copy));
}

std::string to_string(JensenInterpretation j) {
  return j == JensenInterpretation::as_printed ? "as_printed" : "one_minus_deficit";
}

JensenInterpretation jensen_from_string(const std::string& s) {
  if (s == "as_printed") return JensenInterpretation::as_printed;
  if (s == "one_minus_deficit") return JensenInterpretation::one_minus_deficit;
  throw ConfigError("unknown jensen_interpretation '" + s + "'");
}

void TurbineSpec::validate() const {
  if (!(rotor_radius > 0.0)) throw ConfigError("rotor radius must be > 0");
  if (!(wake_expansion > 0.0)) throw ConfigError("wake expansion must be > 0");
  if (thrust_table.empty()) throw ConfigError("thrust table is empty");
  for (std::size_t i = 0; i < thrust_table.size(); ++i) {
    const auto [speed, ct] = thrust_table[i];
    if (!(ct > 0.0 && ct < 1.0)) throw ConfigError("thrust coefficients must lie in (0,1)");
    if (i > 0 && !(speed > thrust_table[i - 1].first))
      throw ConfigError("thrust table speeds must be strictly increasing");
  }
}

double wake_expansion_from_roughness(double constant, double hub_height, double roughness) {
  if (!(hub_height > roughness && roughness > 0.0))
    throw std::domain_error("hub height must exceed a positive roughness length");
  return constant / std::log10(hub_height / roughness);
}

void GridSpec::validate() const {
  if (side_count < 2) throw ConfigError("grid side count must be >= 2");
  if (!(side_length > 0.0)) throw ConfigError("grid side length must be > 0");
}

void FarmProblem::validate() const {
  grid.validate();
  turbine.validate();
  if (regime.size() == 0) throw ConfigError("problem has no wind regime");
  const int n = sites();
  if (max_turbines < 0 || max_turbines > n) throw ConfigError("M must lie in [0, N]");
  if (min_spacing && *min_spacing < 0.0) throw ConfigError("E must be >= 0");
  if (avoidance) {
    if (static_cast<int>(avoidance->size()) != n)
      throw ConfigError("avoidance vector length must equal the site count");
    for (double p : *avoidance)
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("avoidance entries must lie in [0,1]");
  }
  if (weights.count < 0.0 || weights.spacing < 0.0 || weights.avoidance < 0.0)
    throw ConfigError("constraint weights must be >= 0");
}

Layout::Layout(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

Layout Layout::from_index(std::uint64_t index, std::size_t n) {
  if (n > 64) throw std::out_of_range("Layout::from_index supports at most 64 sites");
  Layout l(n);
  for (std::size_t i = 0; i < n; ++i) l.bits_[i] = static_cast<std::uint8_t>((index >> i) & 1U);
  return l;
}

std::uint64_t Layout::to_index() const {
  if (bits_.size() > 64) throw std::out_of_range("Layout::to_index supports at most 64 sites");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) v |= (std::uint64_t{1} << i);
  return v;
}

int Layout::count() const { return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1)); }

std::string Layout::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

Layout Layout::from_string(const std::string& s) {
  Layout l(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      l.bits_[i] = 1;
    else if (s[i] != '0')
      throw std::invalid_argument("layout strings may only contain 0 and 1");
  }
  return l;
}

Point site_position(const GridSpec& grid, int index) {
  if (index < 0 || index >= grid.sites()) throw std::out_of_range("site index out of range");
  const int row = index / grid.side_count;
  const int col = index % grid.side_count;
  const double s = grid.spacing();
  return {col * s, row * s};
}

double wake_radius(const TurbineSpec& turbine, double distance) {
  if (distance < 0.0) throw std::domain_error("wake distance must be >= 0");
  return turbine.rotor_radius + turbine.wake_expansion * distance;
}

double thrust_coefficient(const TurbineSpec& turbine, double speed) {
  const auto& t = turbine.thrust_table;
  if (t.empty()) throw ConfigError("thrust table is empty");
  if (speed < 0.0) throw std::domain_error("windspeed must be >= 0");
  if (speed <= t.front().first) return t.front().second;
  if (speed >= t.back().first) return t.back().second;
  auto hi = std::upper_bound(t.begin(), t.end(), speed,
                             [](double v, const auto& e) { return v < e.first; });
  auto lo = hi - 1;
  const double w = (speed - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

double reduced_windspeed(const TurbineSpec& turbine, double free_speed, double distance,
                         JensenInterpretation jensen) {
  if (free_speed < 0.0) throw std::domain_error("windspeed must be >= 0");
  const double ct = thrust_coefficient(turbine, free_speed);
  if (ct >= 1.0) throw std::domain_error("thrust coefficient must be < 1");
  const double ratio = turbine.rotor_radius / wake_radius(turbine, distance);
  const double deficit = (1.0 - std::sqrt(1.0 - ct)) * ratio * ratio;
  return jensen == JensenInterpretation::as_printed ? free_speed * deficit
                                                    : free_speed * (1.0 - deficit);
}

WindFrame project_on_wind(Point from, Point to, double direction_deg) {
  const double a = direction_deg * std::numbers::pi / 180.0;
  // Downwind unit vector in (x east, y south) for a bearing-from angle.
  const double dx = -std::sin(a);
  const double dy = std::cos(a);
  const double rx = to.x - from.x;
  const double ry = to.y - from.y;
  return {rx * dx + ry * dy, std::abs(rx * dy - ry * dx)};
}

std::vector<WakeMember> wake_set(const GridSpec& grid, const TurbineSpec& turbine, int source,
                                 const WindArrangement& arrangement,
                                 std::optional<double> length_cap) {
  const Point origin = site_position(grid, source);
  std::vector<WakeMember> out;
  for (int j = 0; j < grid.sites(); ++j) {
    if (j == source) continue;
    const auto f = project_on_wind(origin, site_position(grid, j), arrangement.direction_deg);
    if (f.downwind <= kConeSlack) continue;
    if (length_cap && f.downwind > *length_cap + kConeSlack) continue;
    if (f.crosswind <= wake_radius(turbine, f.downwind) + kConeSlack)
      out.push_back({j, f.downwind});
  }
  return out;
}

std::vector<WakeMember> wake_set(const FarmProblem& problem, int source,
                                 const WindArrangement& arrangement) {
  return wake_set(problem.grid, problem.turbine, source, arrangement);
}

double layout_power(const FarmProblem& problem, const Layout& layout) {
  if (static_cast<int>(layout.size()) != problem.sites())
    throw std::invalid_argument("layout length does not match the grid");
  double total = 0.0;
  for (const auto& d : problem.regime.arrangements()) {
    const double v3 = d.free_speed * d.free_speed * d.free_speed;
    for (int i = 0; i < problem.sites(); ++i) {
      if (!layout[i]) continue;
      double loss = 0.0;
      for (const auto& w : wake_set(problem, i, d)) {
        if (!layout[w.site]) continue;
        const double u = reduced_windspeed(problem.turbine, d.free_speed, w.distance, problem.jensen);
        loss += (v3 - u * u * u) / 3.0;
      }
      total += d.probability * (v3 / 3.0 - loss);
    }
  }
  return total;
}

Eigen::MatrixXd windspeed_field(const GridSpec& grid, const TurbineSpec& turbine,
                                const WindRegime& regime, const std::vector<Point>& turbines,
                                int resolution, JensenInterpretation jensen) {
  if (resolution < 2) throw std::invalid_argument("field resolution must be >= 2");
  const double w = grid.side_length;
  for (const auto& t : turbines)
    if (t.x < 0.0 || t.x > w || t.y < 0.0 || t.y > w)
      throw std::domain_error("turbine lies outside the field bounds");

  const double step = w / static_cast<double>(resolution - 1);
  Eigen::MatrixXd field = Eigen::MatrixXd::Zero(resolution, resolution);
  for (int r = 0; r < resolution; ++r) {
    for (int c = 0; c < resolution; ++c) {
      const Point cell{c * step, r * step};
      double value = 0.0;
      for (const auto& d : regime.arrangements()) {
        double speed = d.free_speed;
        for (const auto& t : turbines) {
          const auto f = project_on_wind(t, cell, d.direction_deg);
          if (f.downwind <= kConeSlack) continue;
          if (f.crosswind > wake_radius(turbine, f.downwind) + kConeSlack) continue;
          speed -= d.free_speed - reduced_windspeed(turbine, d.free_speed, f.downwind, jensen);
        }
        value += d.probability * std::max(speed, 0.0);
      }
      field(r, c) = value;
    }
  }
  return field;
}

}  // namespace wflo
