#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wflo/classical.hpp"
#include "wflo/farm.hpp"
#include "wflo/optimizers.hpp"
#include "wflo/qubo.hpp"

namespace wflo {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum class Method { pce, sqoe, exact, anneal };
std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct ExperimentConfig {
  std::string preset = "windfarm_a";
  std::vector<int> sizes{4};  // L values
  Method method = Method::sqoe;
  std::vector<int> params{8};  // q for sqoe, k for pce; ignored otherwise
  std::optional<int> pce_qubits;  // default: smallest register that fits
  int samples = 64;
  std::uint64_t seed = 1;
  std::uint64_t shots = 0;
  double lambda = 200.0;
  bool warm_start = false;
  double step_scale = kDefaultStepScale;
  OptimizerConfig optimizer;
  AnnealSchedule anneal;
  int threads = 0;  // 0 = hardware concurrency
  std::string output_dir = "out";
  bool svg = true;

  /// Throws ConfigError on a malformed config.
  void validate() const;
  /// Short hex digest of every field that affects results (not output_dir,
  /// threads or svg).
  std::string hash() const;

  std::string to_json() const;
  /// Missing keys keep their defaults.
  static ExperimentConfig from_json(const std::string& text);
};

/// Per-sample seed derived from the base seed and the run coordinates.
std::uint64_t run_seed(std::uint64_t base, int size, int param, int sample);

struct Summary {
  int count = 0;
  int invalid_count = 0;  // runs whose turbine count differs from M
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Quartiles by linear interpolation between order statistics.
Summary summarize(std::vector<double> values);

struct BenchGroup {
  Method method = Method::sqoe;
  int param = 0;
  int side = 0;
  int sites = 0;
  int qubits = 0;  // register width used (0 for classical methods)
  std::vector<RunResult> runs;
  std::vector<std::uint64_t> seeds;
  Summary raw;
  Summary trimmed;  // runs with exactly M turbines; count may be 0
  double mean_seconds = 0.0;
};

struct BenchReport {
  ExperimentConfig config;
  std::vector<BenchGroup> groups;
};

/// Throws CapabilityError before any run when a (method, size) pair is not
/// supported. Results do not depend on the thread count.
BenchReport run_benchmark(const ExperimentConfig& config);

/// Builds the preset instance the benchmark uses for one L.
FarmProblem experiment_problem(const ExperimentConfig& config, int side);

struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;  // natural log of the prefactor
};

/// Least-squares fit of log t against log N. Throws std::invalid_argument
/// with fewer than two distinct N.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points);

struct ScalingRow {
  std::string group;
  std::vector<std::pair<double, double>> points;  // (N, mean seconds)
  std::optional<ScalingFit> fit;
};

std::vector<ScalingRow> scaling_table(const BenchReport& report);

enum class OutputKind { boxplot, scaling, runs };

/// Writes CSV (and SVG when the config asks for it) into the config's output
/// directory; returns the written paths. Throws std::runtime_error when the
/// directory cannot be written.
std::vector<std::filesystem::path> emit_outputs(const BenchReport& report, OutputKind kind);

/// JSON manifest with config, seeds, version and produced files.
std::filesystem::path write_manifest(const BenchReport& report,
                                     const std::vector<std::filesystem::path>& files);

std::vector<std::filesystem::path> emit_heatmaps(const FarmProblem& problem,
                                                 const std::vector<double>& lambdas,
                                                 const std::filesystem::path& dir, bool svg);

std::vector<std::filesystem::path> emit_wakefield(const FarmProblem& problem, const Layout& layout,
                                                  int resolution, const std::filesystem::path& dir,
                                                  bool svg);

std::vector<std::filesystem::path> emit_lambda_scan(const std::vector<LambdaScanPoint>& scan,
                                                    const std::string& tag,
                                                    const std::filesystem::path& dir, bool svg);

// Problem documents (JSON with fields mirroring FarmProblem).
std::string problem_to_json(const FarmProblem& problem);
FarmProblem problem_from_json(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace wflo
