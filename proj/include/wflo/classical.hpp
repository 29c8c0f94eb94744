#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wflo/farm.hpp"
#include "wflo/qubo.hpp"

namespace wflo {

inline constexpr int kMaxExhaustiveSites = 24;

struct SolveReport {
  Layout best;
  double best_cost = 0.0;
  bool optimal = false;  // only exhaustive search sets this
  std::uint64_t evaluations = 0;
  double wall_seconds = 0.0;
};

/// Gray-code enumeration of all 2^N layouts with O(N) incremental updates.
/// Ties resolve to the lowest layout index. Throws CapabilityError for N > 24.
/// `threads` <= 0 uses the hardware concurrency; the result does not depend
/// on the thread count.
SolveReport brute_force(const QuboMatrix& q, int threads = 0);

/// Best and runner-up distinct cost (exhaustive). Usable as an ExactSolver.
RankedSolutions brute_force_ranked(const QuboMatrix& q, int threads = 0);

struct AnnealSchedule {
  std::optional<double> initial_temperature;  // default: max |Q_ij|
  double decay = 0.9965;                      // per sweep; ends near 1e-3 * T0
  int sweeps = 2000;
};

/// Single-flip Metropolis annealing; deterministic for a given seed.
SolveReport simulated_annealing(const QuboMatrix& q, const AnnealSchedule& schedule,
                                std::uint64_t seed);

inline constexpr double kAvoidanceThreshold = 0.5;

struct ValidityRecord {
  int turbines = 0;
  bool count_matches = false;
  std::vector<std::pair<int, int>> spacing_violations;  // (i, j), i < j
  std::vector<int> occupied_avoidance_sites;            // P_i > threshold

  bool valid() const {
    return count_matches && spacing_violations.empty() && occupied_avoidance_sites.empty();
  }
};

ValidityRecord check_validity(const FarmProblem& problem, const Layout& layout,
                              double avoidance_threshold = kAvoidanceThreshold);

}  // namespace wflo
