#include <cmath>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "wflo/bench.hpp"
#include "wflo/classical.hpp"
#include "wflo/errors.hpp"
#include "wflo/presets.hpp"

using namespace wflo;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wflo_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string first_line(const fs::path& p) {
  const std::string text = read_file(p);
  return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("fit_scaling recovers planted exponents") {
  for (double p : {1.0, 2.0, 3.0}) {
    std::vector<std::pair<double, double>> pts;
    for (double n : {16.0, 49.0, 81.0}) pts.emplace_back(n, 0.002 * std::pow(n, p));
    const ScalingFit f = fit_scaling(pts);
    CHECK(f.exponent == doctest::Approx(p).epsilon(1e-9));
    CHECK(f.intercept == doctest::Approx(std::log(0.002)).epsilon(1e-9));
  }
  const ScalingFit flat = fit_scaling({{16, 0.5}, {49, 0.5}, {81, 0.5}});
  CHECK(std::abs(flat.exponent) < 1e-12);
  CHECK_THROWS_AS(fit_scaling({{16, 1.0}, {16, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_scaling({{16, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_scaling({{16, 1.0}, {0, 2.0}}), std::invalid_argument);
}

TEST_CASE("summarize uses interpolated quartiles") {
  const Summary s = summarize({4.0, 1.0, 3.0, 2.0, 5.0});
  CHECK(s.count == 5);
  CHECK(s.min == 1.0);
  CHECK(s.q1 == 2.0);
  CHECK(s.median == 3.0);
  CHECK(s.q3 == 4.0);
  CHECK(s.max == 5.0);

  const Summary even = summarize({10.0, 0.0, 20.0, 30.0});
  CHECK(even.q1 == doctest::Approx(7.5));
  CHECK(even.median == doctest::Approx(15.0));
  CHECK(even.q3 == doctest::Approx(22.5));

  const Summary one = summarize({7.0});
  CHECK(one.min == 7.0);
  CHECK(one.median == 7.0);
  CHECK(one.max == 7.0);
  CHECK(summarize({}).count == 0);
}

TEST_CASE("run_seed separates run coordinates") {
  std::set<std::uint64_t> seen;
  for (int side : {4, 7, 9})
    for (int param : {2, 8})
      for (int s = 0; s < 64; ++s) seen.insert(run_seed(1, side, param, s));
  CHECK(seen.size() == 3 * 2 * 64);
  CHECK(run_seed(1, 4, 8, 0) == run_seed(1, 4, 8, 0));
  CHECK(run_seed(1, 4, 8, 0) != run_seed(2, 4, 8, 0));
}

TEST_CASE("config JSON round-trip and hash") {
  ExperimentConfig c;
  c.preset = "windfarm_b";
  c.sizes = {4, 7};
  c.method = Method::pce;
  c.params = {2, 3};
  c.pce_qubits = 6;
  c.samples = 5;
  c.seed = 42;
  c.lambda = 350.0;
  c.optimizer.max_iterations = 123;
  c.anneal.initial_temperature = 9.5;
  const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.hash() == c.hash());
  CHECK(c.hash().size() == 12);

  ExperimentConfig io = c;
  io.output_dir = "elsewhere";
  io.threads = 3;
  io.svg = false;
  CHECK(io.hash() == c.hash());
  ExperimentConfig other = c;
  other.seed = 43;
  CHECK(other.hash() != c.hash());

  const ExperimentConfig partial = ExperimentConfig::from_json(R"({"method":"anneal","samples":3})");
  CHECK(partial.method == Method::anneal);
  CHECK(partial.samples == 3);
  CHECK(partial.preset == ExperimentConfig{}.preset);

  CHECK_THROWS_AS(ExperimentConfig::from_json("{not json"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"samples":0})"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"method":"nope"})"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"sizes":[]})"), ConfigError);
}

TEST_CASE("problem JSON round-trip") {
  for (const auto& [name, side] : std::vector<std::pair<std::string, int>>{{"windfarm_a", 4}, {"alltwalis", 7}}) {
    const FarmProblem p = load_preset(name, side);
    const FarmProblem back = problem_from_json(problem_to_json(p));
    CHECK(problem_to_json(back) == problem_to_json(p));
    CHECK(back.sites() == p.sites());
    CHECK(back.max_turbines == p.max_turbines);
    const QuboMatrix a = assemble_qubo(p);
    const QuboMatrix b = assemble_qubo(back);
    CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("exact method has zero spread") {
  ExperimentConfig c;
  c.method = Method::exact;
  c.sizes = {4};
  c.samples = 64;
  const BenchReport r = run_benchmark(c);
  REQUIRE(r.groups.size() == 1);
  const BenchGroup& g = r.groups[0];
  CHECK(g.runs.size() == 64);
  CHECK(g.raw.min == g.raw.max);
  CHECK(g.raw.count == 64);
  CHECK(g.qubits == 0);
}

TEST_CASE("capability errors fire before any run") {
  ExperimentConfig c;
  c.method = Method::exact;
  c.sizes = {4, 7};
  c.output_dir = scratch("capability").string();
  CHECK_THROWS_AS(run_benchmark(c), CapabilityError);

  ExperimentConfig pce;
  pce.method = Method::pce;
  pce.params = {2};
  pce.shots = 1024;
  CHECK_THROWS_AS(run_benchmark(pce), CapabilityError);
}

TEST_CASE("trimmed summary is a subset of raw") {
  ExperimentConfig c;
  c.method = Method::sqoe;
  c.sizes = {4};
  c.params = {2, 8};
  c.samples = 12;
  c.optimizer.max_iterations = 40;
  const BenchReport r = run_benchmark(c);
  REQUIRE(r.groups.size() == 2);
  for (const auto& g : r.groups) {
    CHECK(g.raw.count == 12);
    CHECK(g.trimmed.count + g.raw.invalid_count == g.raw.count);
    if (g.trimmed.count > 0) {
      CHECK(g.trimmed.max <= g.raw.max);
      CHECK(g.trimmed.min >= g.raw.min);
    }
    int valid = 0;
    for (const auto& run : g.runs) valid += run.turbines == 8 ? 1 : 0;
    CHECK(valid == g.trimmed.count);
  }
}

TEST_CASE("outputs are byte identical across runs and thread counts") {
  ExperimentConfig c;
  c.method = Method::sqoe;
  c.sizes = {4};
  c.params = {8};
  c.samples = 6;
  c.shots = 256;
  c.optimizer.max_iterations = 30;
  c.svg = false;

  std::vector<std::string> contents[2];
  for (int pass = 0; pass < 2; ++pass) {
    c.threads = pass == 0 ? 1 : 4;
    c.output_dir = scratch("repro" + std::to_string(pass)).string();
    const BenchReport r = run_benchmark(c);
    for (OutputKind k : {OutputKind::boxplot, OutputKind::runs})
      for (const auto& f : emit_outputs(r, k))
        if (f.filename().string().rfind("timing_", 0) != 0) contents[pass].push_back(read_file(f));
  }
  REQUIRE(contents[0].size() == 3);
  CHECK(contents[0] == contents[1]);
}

TEST_CASE("output schemas") {
  ExperimentConfig c;
  c.method = Method::anneal;
  c.sizes = {4, 7};
  c.samples = 3;
  c.anneal.sweeps = 50;
  c.output_dir = scratch("schema").string();
  const BenchReport r = run_benchmark(c);

  std::vector<fs::path> files;
  for (OutputKind k : {OutputKind::boxplot, OutputKind::scaling, OutputKind::runs}) {
    const auto part = emit_outputs(r, k);
    files.insert(files.end(), part.begin(), part.end());
  }
  for (const auto& f : files) CHECK(fs::exists(f));
  const std::string tag = "windfarm_a_anneal_" + c.hash();
  const fs::path dir = c.output_dir;
  CHECK(first_line(dir / ("boxplot_raw_L4_" + tag + ".csv")) == "method,param,min,q1,median,q3,max,invalid_count");
  CHECK(fs::exists(dir / ("boxplot_trimmed_L7_" + tag + ".svg")));
  CHECK(first_line(dir / ("runs_" + tag + ".csv")) ==
        "method,param,L,sample,seed,turbines,valid,power,qubo_cost,relaxed_cost,iterations,layout");
  CHECK(first_line(dir / ("timing_" + tag + ".csv")) == "method,param,L,sample,wall_s");
  CHECK(first_line(dir / ("scaling_" + tag + ".csv")) == "group,N,mean_s");
  CHECK(first_line(dir / ("scaling_fit_" + tag + ".csv")) == "group,exponent,intercept");

  const fs::path manifest = write_manifest(r, files);
  const auto j = nlohmann::json::parse(read_file(manifest));
  CHECK(j["config_hash"] == c.hash());
  CHECK(j["groups"].size() == 2);
  CHECK(j["groups"][0]["seeds"].size() == 3);
  CHECK(j["files"].size() == files.size());

  const auto rows = scaling_table(r);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].points.size() == 2);
  CHECK(rows[0].fit.has_value());
}

TEST_CASE("emit_outputs reports unwritable directories") {
  ExperimentConfig c;
  c.method = Method::exact;
  c.samples = 1;
  const fs::path blocker = scratch("blocker");
  write_file(blocker, "file");
  c.output_dir = (blocker / "sub").string();
  const BenchReport r = run_benchmark(c);
  CHECK_THROWS_AS(emit_outputs(r, OutputKind::runs), std::runtime_error);
  fs::remove(blocker);
}

TEST_CASE("heatmap, wakefield and lambda scan emitters") {
  const FarmProblem p = load_preset("windfarm_a", 4);
  const fs::path dir = scratch("emitters");
  fs::create_directories(dir);
  const auto heat = emit_heatmaps(p, {0.0, 200.0}, dir, true);
  CHECK(heat.size() == 4);
  for (const auto& f : heat) CHECK(fs::file_size(f) > 0);
  const auto wake = emit_wakefield(p, Layout::from_index(0x9009, 16), 20, dir, false);
  REQUIRE_FALSE(wake.empty());
  CHECK(fs::file_size(wake[0]) > 0);
  const auto scan = emit_lambda_scan(lambda_scan(p, {0.0, 200.0}, [](const QuboMatrix& q) { return brute_force_ranked(q); }), "a4", dir, false);
  REQUIRE(scan.size() == 1);
  CHECK(first_line(scan[0]).find("lambda") != std::string::npos);
}
