#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wflo/encodings.hpp"
#include "wflo/farm.hpp"
#include "wflo/qubo.hpp"

namespace wflo {

struct OptimizerConfig {
  int max_iterations = 5000;
  int batch = 0;  // parameters per SGD step; 0 picks min(q, ceil(N/8))
  double h_min = 0.05;
  double h_max = 4.0;
  double learning_rate = 5.0;
  int stall_window = 1000;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;  // 0 = exact expectations
  bool record_layouts = false;
  bool normalize_model = true;  // SGD steps on the model divided by IsingModel::scale()

  void validate() const;
};

struct TracePoint {
  int iteration = 0;
  double relaxed_cost = 0.0;
  double best_qubo_cost = 0.0;
  std::string layout;  // filled when record_layouts is set
};

struct RunResult {
  Layout layout;
  double relaxed_cost = 0.0;  // best relaxed cost seen
  double qubo_cost = 0.0;     // cost of `layout`
  double power = 0.0;         // recomputed from `layout` by annotate_run
  int turbines = 0;
  bool valid = false;
  int iterations = 0;
  double wall_seconds = 0.0;
  std::vector<TracePoint> trace;
};

/// Fills power, turbine count and validity from the problem.
void annotate_run(RunResult& run, const FarmProblem& problem);

/// iteration,relaxed_cost,best_qubo_cost
void write_trace_csv(std::ostream& out, const RunResult& run);

/// evaluate_ising at tanh(t * raw).
double relaxed_cost(const IsingModel& model, std::span<const double> raw, double step_scale);

/// f(s') - f(s) where s' equals s except s'[changed[k]] = new_values[k].
/// O(|changed| * N); throws std::invalid_argument on repeated or
/// out-of-range indices.
double local_gradient_cost_delta(const IsingModel& model, const SpinVector& s,
                                 std::span<const int> changed, std::span<const double> new_values);

// ---------------------------------------------------------------------------
// Derivative-free minimization

struct MinimizeOptions {
  int max_iterations = 2000;
  int stall_window = 200;  // stop after this many iterations without a new best
  double initial_step = 0.5;
  double x_tolerance = 1e-10;
  double f_tolerance = 1e-14;
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
};

using Objective = std::function<double(std::span<const double>)>;
using IterationHook = std::function<void(int iteration, double best_value)>;

/// Common interface so a different derivative-free method can be swapped in.
class Minimizer {
 public:
  virtual ~Minimizer() = default;
  virtual MinimizeResult minimize(const Objective& f, std::vector<double> x0,
                                  const MinimizeOptions& options,
                                  const IterationHook& hook = {}) const = 0;
};

/// Standard reflection/expansion/contraction/shrink simplex. The returned
/// point is the first point that attained the best value.
class NelderMead final : public Minimizer {
 public:
  MinimizeResult minimize(const Objective& f, std::vector<double> x0,
                          const MinimizeOptions& options,
                          const IterationHook& hook = {}) const override;
};

// ---------------------------------------------------------------------------

struct PceRunConfig {
  PceConfig pce;
  double step_scale = kDefaultStepScale;
};

/// Minimizes the relaxed cost over the ansatz angles (initialized uniformly in
/// [0, 2*pi)). Exact expectations only; shots > 0 raises CapabilityError.
RunResult simplex_optimize_pce(const IsingModel& model, const PceRunConfig& pce,
                               const OptimizerConfig& config, const Minimizer& minimizer = NelderMead{});

/// Initial angles plus variables pinned at x = 0.
struct WarmStart {
  std::vector<double> theta;
  std::vector<std::uint8_t> frozen;  // per variable
  Layout initial;

  int frozen_count() const;
};

struct WarmStartOptions {
  bool freeze_avoidance = true;
  double threshold = 0.5;  // P_i above this is frozen
  bool budget_start = true;  // start with exactly M turbines
};

/// Throws ConfigError when more than N - M variables would be frozen.
WarmStart warm_start(const FarmProblem& problem, const SqoeConfig& sqoe,
                     const WarmStartOptions& options = {});

/// An angle whose Z and X readouts have the requested signs.
double sqoe_angle_for(bool z_positive, bool x_positive, const SqoeTransform& transform = {});

/// Central-difference gradient of the relaxed cost for the listed parameters,
/// evaluated through local deltas on the variables each parameter drives.
/// `raw` holds the current per-variable readouts; frozen variables are held at
/// raw = -1. Exact expectations.
std::vector<double> sqoe_gradient(const IsingModel& model, const SqoeConfig& sqoe,
                                  std::span<const double> theta, std::span<const double> raw,
                                  std::span<const int> parameters, std::span<const double> steps,
                                  std::span<const std::uint8_t> frozen = {});

/// Stochastic gradient descent over SQOE angles. `start` may be null for a
/// uniform random initialization.
RunResult sgd_optimize_sqoe(const IsingModel& model, const SqoeConfig& sqoe,
                            const OptimizerConfig& config, const WarmStart* start = nullptr);

/// Batch size actually used for a configuration.
int effective_batch(const SqoeConfig& sqoe, const OptimizerConfig& config);

}  // namespace wflo
