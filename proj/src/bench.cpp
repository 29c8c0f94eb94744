#include "wflo/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "wflo/errors.hpp"
#include "wflo/presets.hpp"
#include "wflo/svg.hpp"

namespace wflo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json optimizer_json(const OptimizerConfig& o) {
  return {{"max_iterations", o.max_iterations}, {"batch", o.batch},
          {"h_min", o.h_min},                   {"h_max", o.h_max},
          {"learning_rate", o.learning_rate},   {"stall_window", o.stall_window},
          {"normalize_model", o.normalize_model}};
}

json anneal_json(const AnnealSchedule& a) {
  json j = {{"sweeps", a.sweeps}, {"decay", a.decay}};
  j["initial_temperature"] = a.initial_temperature ? json(*a.initial_temperature) : json(nullptr);
  return j;
}

json result_json(const ExperimentConfig& c) {
  json j = {{"preset", c.preset},         {"sizes", c.sizes},
            {"method", to_string(c.method)}, {"params", c.params},
            {"samples", c.samples},       {"seed", c.seed},
            {"shots", c.shots},           {"lambda", c.lambda},
            {"warm_start", c.warm_start}, {"step_scale", c.step_scale},
            {"optimizer", optimizer_json(c.optimizer)},
            {"anneal", anneal_json(c.anneal)}};
  j["pce_qubits"] = c.pce_qubits ? json(*c.pce_qubits) : json(nullptr);
  return j;
}

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

std::string param_label(Method m, int param) {
  switch (m) {
    case Method::sqoe: return "q=" + std::to_string(param);
    case Method::pce: return "k=" + std::to_string(param);
    default: return "-";
  }
}

std::vector<int> group_params(const ExperimentConfig& c) {
  if (c.method == Method::sqoe || c.method == Method::pce) return c.params;
  return {0};
}

int pce_register(const ExperimentConfig& c, int body, int sites) {
  int n = 0;
  try {
    n = c.pce_qubits ? *c.pce_qubits : pce_min_qubits(body, sites);
  } catch (const CapacityError& e) {
    throw CapabilityError(e.what());
  }
  if (n > kMaxQubits) throw CapabilityError("PCE register exceeds the simulator width");
  if (body > n || PceConfig{n, body}.capacity() < static_cast<std::uint64_t>(sites))
    throw CapabilityError("PCE with n=" + std::to_string(n) + ", k=" + std::to_string(body) +
                          " cannot hold N=" + std::to_string(sites));
  return n;
}

RunResult classical_result(const SolveReport& rep, double seconds) {
  RunResult r;
  r.layout = rep.best;
  r.qubo_cost = rep.best_cost;
  r.relaxed_cost = rep.best_cost;
  r.iterations = static_cast<int>(std::min<std::uint64_t>(rep.evaluations, INT32_MAX));
  r.wall_seconds = seconds;
  return r;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::runtime_error("cannot create output directory " + dir.string());
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::pce: return "pce";
    case Method::sqoe: return "sqoe";
    case Method::exact: return "exact";
    case Method::anneal: return "anneal";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "pce") return Method::pce;
  if (s == "sqoe") return Method::sqoe;
  if (s == "exact") return Method::exact;
  if (s == "anneal") return Method::anneal;
  throw ConfigError("unknown method '" + s + "' (pce, sqoe, exact, anneal)");
}

void ExperimentConfig::validate() const {
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (sizes.empty()) throw ConfigError("at least one grid size is required");
  if ((method == Method::sqoe || method == Method::pce) && params.empty())
    throw ConfigError("sqoe and pce need at least one q or k value");
  for (int p : group_params(*this))
    if ((method == Method::sqoe || method == Method::pce) && p < 1)
      throw ConfigError("q and k must be >= 1");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (!(step_scale > 0.0)) throw ConfigError("step scale must be > 0");
  optimizer.validate();
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(result_json(*this).dump())));
  return std::string(buf).substr(0, 12);
}

std::string ExperimentConfig::to_json() const {
  json j = result_json(*this);
  j["threads"] = threads;
  j["output_dir"] = output_dir;
  j["svg"] = svg;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    take(j, "preset", c.preset);
    take(j, "sizes", c.sizes);
    if (j.contains("method")) c.method = method_from_string(j.at("method").get<std::string>());
    take(j, "params", c.params);
    if (j.contains("pce_qubits") && !j.at("pce_qubits").is_null()) c.pce_qubits = j.at("pce_qubits").get<int>();
    take(j, "samples", c.samples);
    take(j, "seed", c.seed);
    take(j, "shots", c.shots);
    take(j, "lambda", c.lambda);
    take(j, "warm_start", c.warm_start);
    take(j, "step_scale", c.step_scale);
    take(j, "threads", c.threads);
    take(j, "output_dir", c.output_dir);
    take(j, "svg", c.svg);
    if (j.contains("optimizer")) {
      const auto& o = j.at("optimizer");
      take(o, "max_iterations", c.optimizer.max_iterations);
      take(o, "batch", c.optimizer.batch);
      take(o, "h_min", c.optimizer.h_min);
      take(o, "h_max", c.optimizer.h_max);
      take(o, "learning_rate", c.optimizer.learning_rate);
      take(o, "stall_window", c.optimizer.stall_window);
      take(o, "normalize_model", c.optimizer.normalize_model);
    }
    if (j.contains("anneal")) {
      const auto& a = j.at("anneal");
      take(a, "sweeps", c.anneal.sweeps);
      take(a, "decay", c.anneal.decay);
      if (a.contains("initial_temperature") && !a.at("initial_temperature").is_null())
        c.anneal.initial_temperature = a.at("initial_temperature").get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  }
  c.validate();
  return c;
}

std::uint64_t run_seed(std::uint64_t base, int size, int param, int sample) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ static_cast<std::uint64_t>(size));
  h = splitmix64(h ^ static_cast<std::uint64_t>(param));
  return splitmix64(h ^ static_cast<std::uint64_t>(sample));
}

Summary summarize(std::vector<double> values) {
  Summary s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  auto q = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  s.min = values.front();
  s.q1 = q(0.25);
  s.median = q(0.5);
  s.q3 = q(0.75);
  s.max = values.back();
  return s;
}

FarmProblem experiment_problem(const ExperimentConfig& config, int side) {
  return load_preset(config.preset, side, config.lambda);
}

BenchReport run_benchmark(const ExperimentConfig& config) {
  config.validate();
  BenchReport report;
  report.config = config;

  struct Instance {
    FarmProblem problem;
    QuboMatrix qubo;
    IsingModel ising;
  };
  std::vector<Instance> instances;
  std::vector<std::size_t> instance_of;  // per group
  std::vector<WarmStart> warm;           // per group, sqoe only

  // Every capability check happens before the first run.
  for (int side : config.sizes) {
    FarmProblem p = experiment_problem(config, side);
    const int n = p.sites();
    if (config.method == Method::exact && n > kMaxExhaustiveSites)
      throw CapabilityError("exact method supports N <= 24, got N=" + std::to_string(n));
    if (config.method == Method::pce && config.shots > 0)
      throw CapabilityError("PCE runs use exact expectations only");
    QuboMatrix q = assemble_qubo(p);
    IsingModel ising = to_ising(q);
    instances.push_back({std::move(p), std::move(q), std::move(ising)});
    for (int param : group_params(config)) {
      BenchGroup g;
      g.method = config.method;
      g.param = param;
      g.side = side;
      g.sites = n;
      if (config.method == Method::pce) g.qubits = pce_register(config, param, n);
      if (config.method == Method::sqoe) {
        g.qubits = param;
        SqoeConfig sq = sqoe_assign(n, param);
        warm.push_back(config.warm_start ? warm_start(instances.back().problem, sq) : WarmStart{});
      } else {
        warm.emplace_back();
      }
      g.runs.resize(static_cast<std::size_t>(config.samples));
      for (int s = 0; s < config.samples; ++s) g.seeds.push_back(run_seed(config.seed, side, param, s));
      report.groups.push_back(std::move(g));
      instance_of.push_back(instances.size() - 1);
    }
  }

  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));

  // Exhaustive search is deterministic: solve once per group.
  if (config.method == Method::exact) {
    for (std::size_t gi = 0; gi < report.groups.size(); ++gi) {
      const auto& inst = instances[instance_of[gi]];
      const SolveReport rep = brute_force(inst.qubo, threads);
      RunResult r = classical_result(rep, rep.wall_seconds);
      annotate_run(r, inst.problem);
      std::fill(report.groups[gi].runs.begin(), report.groups[gi].runs.end(), r);
    }
  } else {
    struct Job {
      std::size_t group;
      int sample;
    };
    std::vector<Job> jobs;
    for (std::size_t gi = 0; gi < report.groups.size(); ++gi)
      for (int s = 0; s < config.samples; ++s) jobs.push_back({gi, s});
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
      for (std::size_t k = next++; k < jobs.size(); k = next++) {
        const auto [gi, s] = jobs[k];
        auto& g = report.groups[gi];
        const auto& inst = instances[instance_of[gi]];
        const std::uint64_t seed = g.seeds[static_cast<std::size_t>(s)];
        try {
          RunResult r;
          switch (config.method) {
            case Method::anneal: {
              const SolveReport rep = simulated_annealing(inst.qubo, config.anneal, seed);
              r = classical_result(rep, rep.wall_seconds);
              break;
            }
            case Method::sqoe: {
              SqoeConfig sq = sqoe_assign(g.sites, g.param);
              sq.step_scale = config.step_scale;
              OptimizerConfig oc = config.optimizer;
              oc.seed = seed;
              oc.shots = config.shots;
              r = sgd_optimize_sqoe(inst.ising, sq, oc, config.warm_start ? &warm[gi] : nullptr);
              break;
            }
            case Method::pce: {
              OptimizerConfig oc = config.optimizer;
              oc.seed = seed;
              r = simplex_optimize_pce(inst.ising, {{g.qubits, g.param}, config.step_scale}, oc);
              break;
            }
            case Method::exact: break;
          }
          annotate_run(r, inst.problem);
          g.runs[static_cast<std::size_t>(s)] = std::move(r);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    threads = std::min<int>(threads, static_cast<int>(std::max<std::size_t>(1, jobs.size())));
    if (threads <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t gi = 0; gi < report.groups.size(); ++gi) {
    auto& g = report.groups[gi];
    const int m = instances[instance_of[gi]].problem.max_turbines;
    std::vector<double> raw;
    std::vector<double> trimmed;
    double seconds = 0.0;
    int invalid = 0;
    for (const auto& r : g.runs) {
      raw.push_back(r.power);
      seconds += r.wall_seconds;
      if (r.turbines == m)
        trimmed.push_back(r.power);
      else
        ++invalid;
    }
    g.raw = summarize(raw);
    g.trimmed = summarize(trimmed);
    g.raw.invalid_count = g.trimmed.invalid_count = invalid;
    g.mean_seconds = seconds / static_cast<double>(g.runs.size());
  }
  return report;
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [n, t] : points) {
    if (!(n > 0.0 && t > 0.0)) throw std::invalid_argument("scaling points need N > 0 and t > 0");
    xs.push_back(std::log(n));
    ys.push_back(std::log(t));
  }
  std::vector<double> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) throw std::invalid_argument("scaling fit needs at least two distinct N");
  const double k = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  ScalingFit f;
  f.exponent = sxy / sxx;
  f.intercept = my - f.exponent * mx;
  return f;
}

std::vector<ScalingRow> scaling_table(const BenchReport& report) {
  std::vector<ScalingRow> rows;
  for (const auto& g : report.groups) {
    const std::string name = to_string(g.method) + (g.param > 0 ? " " + param_label(g.method, g.param) : "");
    auto it = std::find_if(rows.begin(), rows.end(), [&](const ScalingRow& r) { return r.group == name; });
    if (it == rows.end()) {
      rows.push_back({name, {}, std::nullopt});
      it = rows.end() - 1;
    }
    it->points.emplace_back(static_cast<double>(g.sites), g.mean_seconds);
  }
  for (auto& r : rows) {
    try {
      r.fit = fit_scaling(r.points);
    } catch (const std::invalid_argument&) {
      r.fit.reset();
    }
  }
  return rows;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<fs::path> emit_outputs(const BenchReport& report, OutputKind kind) {
  const auto& c = report.config;
  const fs::path dir = c.output_dir;
  ensure_dir(dir);
  const std::string tag = c.preset + "_" + to_string(c.method) + "_" + c.hash();
  std::vector<fs::path> files;

  if (kind == OutputKind::runs) {
    std::ostringstream runs;
    runs << "method,param,L,sample,seed,turbines,valid,power,qubo_cost,relaxed_cost,iterations,layout\n";
    std::ostringstream timing;
    timing << "method,param,L,sample,wall_s\n";
    for (const auto& g : report.groups)
      for (std::size_t s = 0; s < g.runs.size(); ++s) {
        const auto& r = g.runs[s];
        runs << to_string(g.method) << ',' << param_label(g.method, g.param) << ',' << g.side << ',' << s
             << ',' << g.seeds[s] << ',' << r.turbines << ',' << (r.valid ? 1 : 0) << ',' << fmt(r.power)
             << ',' << fmt(r.qubo_cost) << ',' << fmt(r.relaxed_cost) << ',' << r.iterations << ','
             << r.layout.to_string() << '\n';
        timing << to_string(g.method) << ',' << param_label(g.method, g.param) << ',' << g.side << ','
               << s << ',' << fmt(r.wall_seconds) << '\n';
      }
    files.push_back(dir / ("runs_" + tag + ".csv"));
    write_file(files.back(), runs.str());
    // Wall times vary between runs, so they live apart from the reproducible data.
    files.push_back(dir / ("timing_" + tag + ".csv"));
    write_file(files.back(), timing.str());
    return files;
  }

  if (kind == OutputKind::boxplot) {
    std::vector<int> sides;
    for (const auto& g : report.groups)
      if (std::find(sides.begin(), sides.end(), g.side) == sides.end()) sides.push_back(g.side);
    for (int side : sides) {
      for (const bool trimmed : {false, true}) {
        std::ostringstream csv;
        csv << "method,param,min,q1,median,q3,max,invalid_count\n";
        std::vector<svg::Box> boxes;
        for (const auto& g : report.groups) {
          if (g.side != side) continue;
          const Summary& s = trimmed ? g.trimmed : g.raw;
          csv << to_string(g.method) << ',' << param_label(g.method, g.param);
          if (s.count == 0)
            csv << ",,,,,";
          else
            csv << ',' << fmt(s.min) << ',' << fmt(s.q1) << ',' << fmt(s.median) << ',' << fmt(s.q3) << ','
                << fmt(s.max);
          csv << ',' << s.invalid_count << '\n';
          if (s.count > 0) boxes.push_back({param_label(g.method, g.param), s.min, s.q1, s.median, s.q3, s.max});
        }
        const std::string stem = std::string("boxplot_") + (trimmed ? "trimmed" : "raw") + "_L" +
                                 std::to_string(side) + "_" + tag;
        files.push_back(dir / (stem + ".csv"));
        write_file(files.back(), csv.str());
        if (c.svg) {
          files.push_back(dir / (stem + ".svg"));
          write_file(files.back(), svg::boxplot(c.preset + " L=" + std::to_string(side) +
                                                    (trimmed ? " trimmed" : " raw"),
                                                "model power", boxes));
        }
      }
    }
    return files;
  }

  // scaling
  const auto rows = scaling_table(report);
  std::ostringstream pts;
  pts << "group,N,mean_s\n";
  std::ostringstream fits;
  fits << "group,exponent,intercept\n";
  std::vector<svg::Series> series;
  for (const auto& r : rows) {
    for (const auto& [n, t] : r.points) pts << r.group << ',' << fmt(n) << ',' << fmt(t) << '\n';
    fits << r.group << ',';
    if (r.fit)
      fits << fmt(r.fit->exponent) << ',' << fmt(r.fit->intercept);
    else
      fits << ',';
    fits << '\n';
    svg::Series s{r.group, r.points, std::nullopt};
    if (r.fit) s.fit = std::make_pair(r.fit->exponent, r.fit->intercept);
    series.push_back(std::move(s));
  }
  files.push_back(dir / ("scaling_" + tag + ".csv"));
  write_file(files.back(), pts.str());
  files.push_back(dir / ("scaling_fit_" + tag + ".csv"));
  write_file(files.back(), fits.str());
  if (c.svg) {
    files.push_back(dir / ("scaling_" + tag + ".svg"));
    write_file(files.back(), svg::loglog(c.preset + " time scaling", series));
  }
  return files;
}

fs::path write_manifest(const BenchReport& report, const std::vector<fs::path>& files) {
  const auto& c = report.config;
  ensure_dir(c.output_dir);
  json j;
  j["version"] = kLibraryVersion;
  j["config"] = json::parse(c.to_json());
  j["config_hash"] = c.hash();
  json groups = json::array();
  for (const auto& g : report.groups)
    groups.push_back({{"method", to_string(g.method)},
                      {"param", g.param},
                      {"L", g.side},
                      {"N", g.sites},
                      {"qubits", g.qubits},
                      {"seeds", g.seeds}});
  j["groups"] = groups;
  json names = json::array();
  for (const auto& f : files) names.push_back(f.filename().string());
  j["files"] = names;
  const fs::path path =
      fs::path(c.output_dir) / ("manifest_" + c.preset + "_" + to_string(c.method) + "_" + c.hash() + ".json");
  write_file(path, j.dump(2) + "\n");
  return path;
}

std::vector<fs::path> emit_heatmaps(const FarmProblem& problem, const std::vector<double>& lambdas,
                                    const fs::path& dir, bool svg_out) {
  ensure_dir(dir);
  std::vector<fs::path> files;
  for (double lambda : lambdas) {
    FarmProblem p = problem;
    p.weights = ConstraintWeights::uniform(lambda);
    const Heatmap h = heatmap_data(assemble_qubo(p));
    const std::string stem = "heatmap_" + p.name + "_L" + std::to_string(p.grid.side_count) + "_lambda" + fmt(lambda);
    std::ostringstream csv;
    write_heatmap_csv(csv, h);
    files.push_back(dir / (stem + ".csv"));
    write_file(files.back(), csv.str());
    if (svg_out) {
      files.push_back(dir / (stem + ".svg"));
      write_file(files.back(), svg::heatmap(p.name + " log10|Q|, lambda=" + fmt(lambda), h));
    }
  }
  return files;
}

std::vector<fs::path> emit_wakefield(const FarmProblem& problem, const Layout& layout, int resolution,
                                     const fs::path& dir, bool svg_out) {
  ensure_dir(dir);
  std::vector<Point> pts;
  std::vector<std::pair<double, double>> markers;
  const double w = problem.grid.side_length;
  for (int i = 0; i < problem.sites(); ++i) {
    if (!layout[static_cast<std::size_t>(i)]) continue;
    const Point p = site_position(problem.grid, i);
    pts.push_back(p);
    markers.emplace_back(p.x / w * (resolution - 1), p.y / w * (resolution - 1));
  }
  const Eigen::MatrixXd f =
      windspeed_field(problem.grid, problem.turbine, problem.regime, pts, resolution, problem.jensen);
  std::ostringstream csv;
  csv << "y\\x";
  for (int c = 0; c < resolution; ++c) csv << ',' << fmt(w * c / (resolution - 1));
  csv << '\n';
  for (int r = 0; r < resolution; ++r) {
    csv << fmt(w * r / (resolution - 1));
    for (int c = 0; c < resolution; ++c) csv << ',' << fmt(f(r, c));
    csv << '\n';
  }
  const std::string stem = "wakefield_" + problem.name + "_L" + std::to_string(problem.grid.side_count);
  std::vector<fs::path> files{dir / (stem + ".csv")};
  write_file(files.back(), csv.str());
  if (svg_out) {
    files.push_back(dir / (stem + ".svg"));
    write_file(files.back(), svg::field(problem.name + " mean windspeed", f, markers));
  }
  return files;
}

std::vector<fs::path> emit_lambda_scan(const std::vector<LambdaScanPoint>& scan, const std::string& tag,
                                       const fs::path& dir, bool svg_out) {
  ensure_dir(dir);
  std::ostringstream csv;
  csv << "lambda,turbines,cost_gap,power_gap,layout\n";
  std::vector<double> xs, turbines, gaps;
  for (const auto& p : scan) {
    csv << fmt(p.lambda) << ',' << p.turbines << ',' << fmt(p.cost_gap) << ',' << fmt(p.power_gap) << ','
        << p.best.to_string() << '\n';
    xs.push_back(p.lambda);
    turbines.push_back(p.turbines);
    gaps.push_back(p.power_gap);
  }
  std::vector<fs::path> files{dir / ("lambda_" + tag + ".csv")};
  write_file(files.back(), csv.str());
  if (svg_out) {
    files.push_back(dir / ("lambda_" + tag + ".svg"));
    write_file(files.back(), svg::two_panel("lambda scan " + tag, "lambda", xs, "turbines", turbines,
                                            "power gap", gaps));
  }
  return files;
}

std::string problem_to_json(const FarmProblem& p) {
  json j;
  j["name"] = p.name;
  j["grid"] = {{"side_count", p.grid.side_count}, {"side_length", p.grid.side_length}};
  json table = json::array();
  for (const auto& [v, ct] : p.turbine.thrust_table) table.push_back({v, ct});
  j["turbine"] = {{"rotor_radius", p.turbine.rotor_radius},
                  {"hub_height", p.turbine.hub_height},
                  {"wake_expansion", p.turbine.wake_expansion},
                  {"thrust_table", table}};
  json regime = json::array();
  for (const auto& a : p.regime.arrangements())
    regime.push_back({{"direction_deg", a.direction_deg}, {"free_speed", a.free_speed}, {"probability", a.probability}});
  j["regime"] = regime;
  j["max_turbines"] = p.max_turbines;
  j["min_spacing"] = p.min_spacing ? json(*p.min_spacing) : json(nullptr);
  j["avoidance"] = p.avoidance ? json(*p.avoidance) : json(nullptr);
  j["weights"] = {{"count", p.weights.count}, {"spacing", p.weights.spacing}, {"avoidance", p.weights.avoidance}};
  j["jensen"] = to_string(p.jensen);
  return j.dump(2);
}

FarmProblem problem_from_json(const std::string& text) {
  FarmProblem p;
  try {
    const json j = json::parse(text);
    take(j, "name", p.name);
    const auto& g = j.at("grid");
    p.grid.side_count = g.at("side_count").get<int>();
    p.grid.side_length = g.at("side_length").get<double>();
    const auto& t = j.at("turbine");
    p.turbine.rotor_radius = t.at("rotor_radius").get<double>();
    take(t, "hub_height", p.turbine.hub_height);
    p.turbine.wake_expansion = t.at("wake_expansion").get<double>();
    for (const auto& row : t.at("thrust_table"))
      p.turbine.thrust_table.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    std::vector<WindArrangement> arr;
    for (const auto& a : j.at("regime"))
      arr.push_back({a.at("direction_deg").get<double>(), a.at("free_speed").get<double>(),
                     a.at("probability").get<double>()});
    p.regime = WindRegime(std::move(arr));
    p.max_turbines = j.at("max_turbines").get<int>();
    if (j.contains("min_spacing") && !j.at("min_spacing").is_null())
      p.min_spacing = j.at("min_spacing").get<double>();
    if (j.contains("avoidance") && !j.at("avoidance").is_null())
      p.avoidance = j.at("avoidance").get<std::vector<double>>();
    if (j.contains("weights")) {
      const auto& w = j.at("weights");
      take(w, "count", p.weights.count);
      take(w, "spacing", p.weights.spacing);
      take(w, "avoidance", p.weights.avoidance);
    }
    if (j.contains("jensen")) p.jensen = jensen_from_string(j.at("jensen").get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad problem document: ") + e.what());
  }
  p.validate();
  return p;
}

}  // namespace wflo
