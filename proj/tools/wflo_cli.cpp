// wflo: build windfarm QUBOs, solve them, and run the benchmark experiments.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wflo/bench.hpp"
#include "wflo/classical.hpp"
#include "wflo/encodings.hpp"
#include "wflo/errors.hpp"
#include "wflo/optimizers.hpp"
#include "wflo/presets.hpp"
#include "wflo/qubo.hpp"

using namespace wflo;
namespace fs = std::filesystem;

namespace {

struct ProblemArgs {
  std::string preset = "windfarm_a";
  int side = 4;
  double lambda = 200.0;
  std::string problem_file;
  std::string jensen;

  void attach(CLI::App* app) {
    app->add_option("--preset", preset, "Preset name")->capture_default_str();
    app->add_option("-L,--side", side, "Grid side count L")->capture_default_str();
    app->add_option("--lambda", lambda, "Penalty weight for all constraints")->capture_default_str();
    app->add_option("--problem", problem_file, "Problem JSON (overrides --preset/-L)");
    app->add_option("--jensen", jensen, "Deficit reading: as_printed or one_minus_deficit");
  }

  FarmProblem load() const {
    FarmProblem p = problem_file.empty() ? load_preset(preset, side, lambda)
                                         : problem_from_json(read_file(problem_file));
    if (!problem_file.empty()) p.weights = ConstraintWeights::uniform(lambda);
    if (!jensen.empty()) p.jensen = jensen_from_string(jensen);
    return p;
  }
};

struct BenchArgs {
  std::string config_file;
  std::string preset;
  std::vector<int> sizes;
  std::string method;
  std::vector<int> params;
  int samples = 0;
  long long seed = -1;
  long long shots = -1;
  int threads = -1;
  std::string out;
  bool no_svg = false;
  bool warm = false;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_file, "Experiment config JSON");
    app->add_option("--preset", preset, "Override preset");
    app->add_option("--sizes", sizes, "Override L list");
    app->add_option("--method", method, "Override method: pce, sqoe, exact, anneal");
    app->add_option("--params", params, "Override q list (sqoe) or k list (pce)");
    app->add_option("--samples", samples, "Override sample count");
    app->add_option("--seed", seed, "Override base seed");
    app->add_option("--shots", shots, "Override shots (0 = exact expectations)");
    app->add_option("--threads", threads, "Worker threads (0 = all cores)");
    app->add_option("-o,--out", out, "Override output directory");
    app->add_flag("--no-svg", no_svg, "Skip SVG plots");
    app->add_flag("--warm-start", warm, "SQOE warm start");
  }

  ExperimentConfig load() const {
    ExperimentConfig c = config_file.empty() ? ExperimentConfig{} : ExperimentConfig::from_json(read_file(config_file));
    if (!preset.empty()) c.preset = preset;
    if (!sizes.empty()) c.sizes = sizes;
    if (!method.empty()) c.method = method_from_string(method);
    if (!params.empty()) c.params = params;
    if (samples > 0) c.samples = samples;
    if (seed >= 0) c.seed = static_cast<std::uint64_t>(seed);
    if (shots >= 0) c.shots = static_cast<std::uint64_t>(shots);
    if (threads >= 0) c.threads = threads;
    if (!out.empty()) c.output_dir = out;
    if (no_svg) c.svg = false;
    if (warm) c.warm_start = true;
    c.validate();
    return c;
  }
};

void print_report(const BenchReport& r) {
  std::printf("%-7s %-6s %3s %4s %6s %12s %12s %12s %8s %10s\n", "method", "param", "L", "N", "valid",
              "raw max", "trim max", "trim med", "invalid", "mean s");
  for (const auto& g : r.groups) {
    const int valid = static_cast<int>(std::count_if(g.runs.begin(), g.runs.end(), [](const RunResult& x) { return x.valid; }));
    std::printf("%-7s %-6d %3d %4d %6d %12.3f %12s %12s %8d %10.4f\n", to_string(g.method).c_str(), g.param,
                g.side, g.sites, valid, g.raw.max,
                g.trimmed.count ? std::to_string(g.trimmed.max).c_str() : "-",
                g.trimmed.count ? std::to_string(g.trimmed.median).c_str() : "-", g.raw.invalid_count,
                g.mean_seconds);
  }
}

void list_files(const std::vector<fs::path>& files) {
  for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Windfarm layout optimization with qubit-efficient encodings"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "Assemble the QUBO for a problem and export it");
  ProblemArgs build_p;
  build_p.attach(build);
  std::string qubo_out, problem_out, encoding, map_out;
  int enc_param = 0;
  build->add_option("--qubo-out", qubo_out, "Write the QUBO text file");
  build->add_option("--problem-out", problem_out, "Write the problem JSON");
  build->add_option("--encoding", encoding, "Also print an encoding: pce or sqoe");
  build->add_option("--enc-param", enc_param, "k for pce, q for sqoe");
  build->add_option("--map-out", map_out, "Write the encoding map");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one problem with one method");
  ProblemArgs solve_p;
  solve_p.attach(solve);
  std::string solve_method = "sqoe", trace_out;
  int solve_param = 8;
  long long solve_seed = 1;
  std::uint64_t solve_shots = 0;
  bool solve_warm = false;
  OptimizerConfig solve_opt;
  AnnealSchedule solve_anneal;
  solve->add_option("--method", solve_method, "pce, sqoe, exact, anneal")->capture_default_str();
  solve->add_option("--param", solve_param, "q for sqoe, k for pce")->capture_default_str();
  solve->add_option("--seed", solve_seed)->capture_default_str();
  solve->add_option("--shots", solve_shots, "0 = exact expectations")->capture_default_str();
  solve->add_flag("--warm-start", solve_warm, "SQOE warm start");
  solve->add_option("--iterations", solve_opt.max_iterations)->capture_default_str();
  solve->add_option("--learning-rate", solve_opt.learning_rate)->capture_default_str();
  solve->add_option("--sweeps", solve_anneal.sweeps, "Annealing sweeps")->capture_default_str();
  solve->add_option("--trace-out", trace_out, "Write the optimizer trace CSV");

  // bench / scaling
  auto* bench = app.add_subcommand("bench", "Sampled power-output distributions (raw and trimmed)");
  BenchArgs bench_a;
  bench_a.attach(bench);
  auto* scaling = app.add_subcommand("scaling", "Mean solve time against N with log-log fits");
  BenchArgs scaling_a;
  scaling_a.attach(scaling);

  // heatmap
  auto* heat = app.add_subcommand("heatmap", "log10|Q| matrices for several penalty weights");
  ProblemArgs heat_p;
  heat_p.attach(heat);
  std::string heat_lambdas = "0,250", heat_out = "out";
  heat->add_option("--lambdas", heat_lambdas, "Comma-separated lambda values")->capture_default_str();
  heat->add_option("-o,--out", heat_out)->capture_default_str();

  // wakefield
  auto* wake = app.add_subcommand("wakefield", "Regime-averaged windspeed field for a layout");
  ProblemArgs wake_p;
  wake_p.attach(wake);
  std::string wake_layout, wake_out = "out";
  int wake_res = 200;
  wake->add_option("--layout", wake_layout, "Occupancy string; default: best annealing layout");
  wake->add_option("--resolution", wake_res)->capture_default_str();
  wake->add_option("-o,--out", wake_out)->capture_default_str();

  // lambda-scan
  auto* scan = app.add_subcommand("lambda-scan", "Exact optimum against the penalty weight");
  ProblemArgs scan_p;
  scan_p.attach(scan);
  double scan_from = 0, scan_to = 400, scan_step = 10;
  std::string scan_out = "out";
  scan->add_option("--from", scan_from)->capture_default_str();
  scan->add_option("--to", scan_to)->capture_default_str();
  scan->add_option("--step", scan_step)->capture_default_str();
  scan->add_option("-o,--out", scan_out)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      const FarmProblem p = build_p.load();
      const QuboMatrix q = assemble_qubo(p);
      std::printf("problem %s  L=%d  N=%d  M=%d  jensen=%s\n", p.name.c_str(), p.grid.side_count, p.sites(),
                  p.max_turbines, to_string(p.jensen).c_str());
      std::printf("qubo offset %.6f  max|Q| %.6f\n", q.offset(), q.matrix().cwiseAbs().maxCoeff());
      if (!qubo_out.empty()) {
        std::ofstream f(qubo_out);
        write_qubo_text(f, q);
        std::printf("wrote %s\n", qubo_out.c_str());
      }
      if (!problem_out.empty()) {
        write_file(problem_out, problem_to_json(p) + "\n");
        std::printf("wrote %s\n", problem_out.c_str());
      }
      if (!encoding.empty()) {
        EncodingMap m;
        if (encoding == "pce") {
          const int k = enc_param > 0 ? enc_param : 2;
          const int n = pce_min_qubits(k, p.sites());
          const PceAnsatz a(n, k);
          m = pce_enumerate(n, k, p.sites());
          std::printf("pce k=%d n=%d rotations=%d cnots=%d\n", k, n, a.parameter_count(), a.cnot_count());
        } else if (encoding == "sqoe") {
          const int qn = enc_param > 0 ? enc_param : 8;
          const SqoeConfig c = sqoe_assign(p.sites(), qn);
          m = sqoe_encoding_map(c);
          std::printf("sqoe q=%d parameters=%d cycling=%s\n", qn, c.parameter_count(), c.cycling() ? "yes" : "no");
        } else {
          throw ConfigError("encoding must be pce or sqoe");
        }
        if (!map_out.empty()) {
          std::ofstream f(map_out);
          m.write_text(f);
          std::printf("wrote %s\n", map_out.c_str());
        }
      }
      return 0;
    }

    if (*solve) {
      const FarmProblem p = solve_p.load();
      const QuboMatrix q = assemble_qubo(p);
      const IsingModel ising = to_ising(q);
      RunResult r;
      const Method m = method_from_string(solve_method);
      solve_opt.seed = static_cast<std::uint64_t>(solve_seed);
      solve_opt.shots = solve_shots;
      if (m == Method::exact || m == Method::anneal) {
        const SolveReport rep = m == Method::exact ? brute_force(q)
                                                   : simulated_annealing(q, solve_anneal, solve_opt.seed);
        r.layout = rep.best;
        r.qubo_cost = rep.best_cost;
        r.wall_seconds = rep.wall_seconds;
      } else if (m == Method::sqoe) {
        const SqoeConfig c = sqoe_assign(p.sites(), solve_param);
        WarmStart ws;
        if (solve_warm) ws = warm_start(p, c);
        r = sgd_optimize_sqoe(ising, c, solve_opt, solve_warm ? &ws : nullptr);
      } else {
        const int n = pce_min_qubits(solve_param, p.sites());
        r = simplex_optimize_pce(ising, {{n, solve_param}, kDefaultStepScale}, solve_opt);
      }
      annotate_run(r, p);
      std::printf("layout    %s\n", r.layout.to_string().c_str());
      std::printf("cost      %.6f\n", r.qubo_cost);
      std::printf("power     %.6f\n", r.power);
      std::printf("turbines  %d (M=%d)  valid %s\n", r.turbines, p.max_turbines, r.valid ? "yes" : "no");
      std::printf("seconds   %.4f\n", r.wall_seconds);
      if (!trace_out.empty()) {
        std::ofstream f(trace_out);
        write_trace_csv(f, r);
        std::printf("wrote %s\n", trace_out.c_str());
      }
      return 0;
    }

    if (*bench || *scaling) {
      const ExperimentConfig c = (*bench ? bench_a : scaling_a).load();
      const BenchReport report = run_benchmark(c);
      print_report(report);
      std::vector<fs::path> files = emit_outputs(report, OutputKind::runs);
      const auto more = emit_outputs(report, *bench ? OutputKind::boxplot : OutputKind::scaling);
      files.insert(files.end(), more.begin(), more.end());
      if (*scaling)
        for (const auto& row : scaling_table(report))
          std::printf("%-12s exponent %s\n", row.group.c_str(),
                      row.fit ? std::to_string(row.fit->exponent).c_str() : "n/a (one N)");
      files.push_back(write_manifest(report, files));
      list_files(files);
      return 0;
    }

    if (*heat) {
      list_files(emit_heatmaps(heat_p.load(), parse_list(heat_lambdas), heat_out, true));
      return 0;
    }

    if (*wake) {
      const FarmProblem p = wake_p.load();
      Layout layout;
      if (!wake_layout.empty()) {
        layout = Layout::from_string(wake_layout);
      } else {
        const QuboMatrix q = assemble_qubo(p);
        layout = (p.sites() <= 20 ? brute_force(q) : simulated_annealing(q, {}, 1)).best;
      }
      list_files(emit_wakefield(p, layout, wake_res, wake_out, true));
      return 0;
    }

    if (*scan) {
      const FarmProblem p = scan_p.load();
      std::vector<double> lambdas;
      for (double l = scan_from; l <= scan_to + 1e-9; l += scan_step) lambdas.push_back(l);
      const auto pts = lambda_scan(p, lambdas, [](const QuboMatrix& q) { return brute_force_ranked(q); });
      for (const auto& pt : pts)
        std::printf("lambda %8.2f  turbines %3d  cost_gap %12.4f  power_gap %12.4f\n", pt.lambda, pt.turbines,
                    pt.cost_gap, pt.power_gap);
      const std::string tag = p.name + "_L" + std::to_string(p.grid.side_count) + "_" + to_string(p.jensen);
      list_files(emit_lambda_scan(pts, tag, scan_out, true));
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
