#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace wflo {

/// One (direction, speed, probability) entry of a wind regime.
/// `direction_deg` is the bearing the wind blows FROM, clockwise from grid
/// north (towards row 0).
struct WindArrangement {
  double direction_deg = 0.0;
  double free_speed = 0.0;
  double probability = 0.0;
};

/// Discrete distribution over wind arrangements.
class WindRegime {
 public:
  WindRegime() = default;
  /// Throws ConfigError on an empty list, negative speeds or probabilities
  /// outside [0,1]. Directions are wrapped into [0,360).
  explicit WindRegime(std::vector<WindArrangement> arrangements);

  const std::vector<WindArrangement>& arrangements() const { return arrangements_; }
  std::size_t size() const { return arrangements_.size(); }
  double total_probability() const;
  bool is_normalized(double tol = 1e-6) const;
  WindRegime normalized() const;

 private:
  std::vector<WindArrangement> arrangements_;
};

/// Which reading of the top-hat Jensen deficit to use for u_ij.
///   as_printed:        u = v * (1 - sqrt(1 - C_T)) * (r_t / r_w)^2
///   one_minus_deficit: u = v * (1 - (1 - sqrt(1 - C_T)) * (r_t / r_w)^2)
enum class JensenInterpretation { as_printed, one_minus_deficit };

inline constexpr JensenInterpretation kDefaultJensen = JensenInterpretation::one_minus_deficit;

std::string to_string(JensenInterpretation j);
JensenInterpretation jensen_from_string(const std::string& s);

struct TurbineSpec {
  double rotor_radius = 0.0;    // r_t, m
  double hub_height = 0.0;      // m
  double wake_expansion = 0.0;  // a, dimensionless
  std::vector<std::pair<double, double>> thrust_table;  // (speed m/s, C_T)

  /// Throws ConfigError when an invariant is broken.
  void validate() const;
};

/// a = A / log10(hub height / z0), the roughness rule used for the presets.
double wake_expansion_from_roughness(double constant, double hub_height, double roughness);

struct Point {
  double x = 0.0;  // east, m
  double y = 0.0;  // south (row direction), m
};

struct GridSpec {
  int side_count = 2;        // L
  double side_length = 0.0;  // W_L, m

  int sites() const { return side_count * side_count; }
  double spacing() const { return side_length / static_cast<double>(side_count - 1); }
  void validate() const;
};

struct ConstraintWeights {
  double count = 200.0;      // lambda_1
  double spacing = 200.0;    // lambda_2
  double avoidance = 200.0;  // lambda_3

  static ConstraintWeights uniform(double lambda) { return {lambda, lambda, lambda}; }
};

struct FarmProblem {
  std::string name;
  GridSpec grid;
  TurbineSpec turbine;
  WindRegime regime;
  int max_turbines = 0;                       // M
  std::optional<double> min_spacing;          // E, m
  std::optional<std::vector<double>> avoidance;  // P, one entry per site
  ConstraintWeights weights;
  JensenInterpretation jensen = kDefaultJensen;

  int sites() const { return grid.sites(); }
  void validate() const;
};

/// Binary occupancy vector, one entry per site.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::size_t n) : bits_(n, 0) {}
  explicit Layout(std::vector<std::uint8_t> bits);

  /// Bit i of `index` is site i. Requires n <= 64.
  static Layout from_index(std::uint64_t index, std::size_t n);
  std::uint64_t to_index() const;

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool on) { bits_[i] = on ? 1 : 0; }
  void flip(std::size_t i) { bits_[i] ^= 1; }
  int count() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// "0110..." in site order.
  std::string to_string() const;
  static Layout from_string(const std::string& s);

  bool operator==(const Layout&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Row-major, zero-based, row 0 at the top: (col * spacing, row * spacing).
Point site_position(const GridSpec& grid, int index);

double wake_radius(const TurbineSpec& turbine, double distance);

/// Piecewise-linear in speed, clamped to the end entries.
double thrust_coefficient(const TurbineSpec& turbine, double speed);

double reduced_windspeed(const TurbineSpec& turbine, double free_speed, double distance,
                         JensenInterpretation jensen = kDefaultJensen);

struct WakeMember {
  int site = 0;
  double distance = 0.0;  // downwind distance, m

  bool operator==(const WakeMember&) const = default;
};

/// Downwind/crosswind split of `to - from` for a given wind bearing.
struct WindFrame {
  double downwind = 0.0;
  double crosswind = 0.0;  // absolute value
};
WindFrame project_on_wind(Point from, Point to, double direction_deg);

/// Sites whose centres lie in the wake cone of a turbine at `source`.
/// `length_cap` (m) is only used by fixtures; real problems leave it empty.
std::vector<WakeMember> wake_set(const GridSpec& grid, const TurbineSpec& turbine, int source,
                                 const WindArrangement& arrangement,
                                 std::optional<double> length_cap = std::nullopt);
std::vector<WakeMember> wake_set(const FarmProblem& problem, int source,
                                 const WindArrangement& arrangement);

/// Linear-superposition power of a layout in model units (v^3/3 per turbine).
double layout_power(const FarmProblem& problem, const Layout& layout);

/// Regime-averaged windspeed on a resolution x resolution sample grid that
/// spans the farm square. Row r, column c samples (c*W/(res-1), r*W/(res-1)).
Eigen::MatrixXd windspeed_field(const GridSpec& grid, const TurbineSpec& turbine,
                                const WindRegime& regime, const std::vector<Point>& turbines,
                                int resolution, JensenInterpretation jensen = kDefaultJensen);

}  // namespace wflo
