#include "wflo/optimizers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include "wflo/classical.hpp"
#include "wflo/errors.hpp"

namespace wflo {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool improves(double candidate, double incumbent) {
  return candidate < incumbent - 1e-12 * std::max(1.0, std::abs(incumbent));
}

IsingModel normalized(const IsingModel& m) {
  const double s = m.scale();
  if (s == 0.0) return m;
  return {m.couplings / s, m.fields / s, m.offset / s};
}

SpinVector relax(std::span<const double> raw, double t) {
  SpinVector s(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) s[static_cast<Eigen::Index>(i)] = std::tanh(t * raw[i]);
  return s;
}

Layout round_raw(std::span<const double> raw) {
  Layout l(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) l.set(i, raw[i] > 0.0);
  return l;
}

double readout(const SlotReadout& r, std::size_t k, Axis axis) {
  return axis == Axis::z ? r.z[k] : r.x[k];
}

// Gradient for parameters[k] from readouts taken at theta +/- steps[k]
// (entry k of `plus` / `minus`).
std::vector<double> gradient_from_readouts(const IsingModel& model, const SqoeConfig& sqoe,
                                           const SpinVector& s, std::span<const int> parameters,
                                           std::span<const double> steps, const SlotReadout& plus,
                                           const SlotReadout& minus,
                                           std::span<const std::uint8_t> frozen) {
  std::vector<double> g(parameters.size(), 0.0);
  std::vector<int> vars;
  std::vector<double> sp;
  std::vector<double> sm;
  for (std::size_t k = 0; k < parameters.size(); ++k) {
    vars.clear();
    sp.clear();
    sm.clear();
    for (int v : sqoe.variables_of(parameters[k])) {
      if (!frozen.empty() && frozen[static_cast<std::size_t>(v)]) continue;
      const Axis axis = sqoe.slots[static_cast<std::size_t>(v)].axis;
      vars.push_back(v);
      sp.push_back(std::tanh(sqoe.step_scale * readout(plus, k, axis)));
      sm.push_back(std::tanh(sqoe.step_scale * readout(minus, k, axis)));
    }
    if (vars.empty()) continue;
    const double dp = local_gradient_cost_delta(model, s, vars, sp);
    const double dm = local_gradient_cost_delta(model, s, vars, sm);
    g[k] = (dp - dm) / (2.0 * steps[k]);
  }
  return g;
}

SlotReadout exact_readout(std::span<const double> angles, const SqoeTransform& tr) {
  std::mt19937_64 unused;
  return sqoe_measure(angles, tr, 1, 0, unused);
}

void write_raw(const SqoeConfig& sqoe, std::span<const int> parameters, const SlotReadout& r,
               std::vector<double>& raw) {
  for (std::size_t k = 0; k < parameters.size(); ++k)
    for (int v : sqoe.variables_of(parameters[k]))
      raw[static_cast<std::size_t>(v)] = readout(r, k, sqoe.slots[static_cast<std::size_t>(v)].axis);
}

void pin_frozen(std::vector<double>& raw, std::span<const std::uint8_t> frozen) {
  for (std::size_t i = 0; i < frozen.size(); ++i)
    if (frozen[i]) raw[i] = -1.0;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
  if (batch < 0) throw ConfigError("batch must be >= 0");
  if (!(h_min > 0.0 && h_min <= h_max)) throw ConfigError("need 0 < h_min <= h_max");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (stall_window < 1) throw ConfigError("stall window must be >= 1");
}

void annotate_run(RunResult& run, const FarmProblem& problem) {
  run.power = layout_power(problem, run.layout);
  const auto v = check_validity(problem, run.layout);
  run.turbines = v.turbines;
  run.valid = v.valid();
}

void write_trace_csv(std::ostream& out, const RunResult& run) {
  out.precision(17);
  out << "iteration,relaxed_cost,best_qubo_cost\n";
  for (const auto& p : run.trace)
    out << p.iteration << ',' << p.relaxed_cost << ',' << p.best_qubo_cost << '\n';
}

double relaxed_cost(const IsingModel& model, std::span<const double> raw, double step_scale) {
  if (static_cast<int>(raw.size()) != model.size())
    throw std::invalid_argument("raw vector length does not match the model");
  return evaluate_ising(model, relax(raw, step_scale));
}

double local_gradient_cost_delta(const IsingModel& model, const SpinVector& s,
                                 std::span<const int> changed, std::span<const double> new_values) {
  const int n = model.size();
  if (s.size() != n) throw std::invalid_argument("spin vector length does not match the model");
  if (changed.size() != new_values.size())
    throw std::invalid_argument("changed set and new values differ in length");
  for (std::size_t a = 0; a < changed.size(); ++a) {
    if (changed[a] < 0 || changed[a] >= n) throw std::invalid_argument("changed index out of range");
    for (std::size_t b = 0; b < a; ++b)
      if (changed[a] == changed[b]) throw std::invalid_argument("changed index repeated");
  }
  const auto& H = model.couplings;
  double delta = 0.0;
  for (std::size_t a = 0; a < changed.size(); ++a) {
    const int i = changed[a];
    const double d = new_values[a] - s[i];
    // Row i against the unchanged spins.
    double outside = H.row(i).dot(s);
    for (std::size_t b = 0; b < changed.size(); ++b) outside -= H(i, changed[b]) * s[changed[b]];
    delta += model.fields[i] * d + 2.0 * outside * d;
    for (std::size_t b = 0; b < changed.size(); ++b) {
      const int j = changed[b];
      delta += H(i, j) * (new_values[a] * new_values[b] - s[i] * s[j]);
    }
  }
  return delta;
}

// ---------------------------------------------------------------------------

MinimizeResult NelderMead::minimize(const Objective& f, std::vector<double> x0,
                                    const MinimizeOptions& options, const IterationHook& hook) const {
  const std::size_t n = x0.size();
  MinimizeResult res;
  res.x = x0;
  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++res.evaluations;
    if (res.evaluations == 1 || v < res.value) {
      res.value = v;
      res.x = x;
    }
    return v;
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  values[0] = eval(x0);
  if (n == 0) return res;
  for (std::size_t i = 0; i < n; ++i) {
    simplex[i + 1][i] += options.initial_step;
    values[i + 1] = eval(simplex[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n);
  auto point = [&](double coeff, const std::vector<double>& toward) {
    // centroid + coeff * (toward - centroid)
    std::vector<double> p(n);
    for (std::size_t d = 0; d < n; ++d) p[d] = centroid[d] + coeff * (toward[d] - centroid[d]);
    return p;
  };

  int last_improvement = 0;
  double best_seen = res.value;
  for (int it = 1; it <= options.max_iterations; ++it) {
    res.iterations = it;
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double fspread = 0.0;
    double xspread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      fspread = std::max(fspread, std::abs(values[i] - values[best]));
      for (std::size_t d = 0; d < n; ++d)
        xspread = std::max(xspread, std::abs(simplex[i][d] - simplex[best][d]));
    }
    if (fspread <= options.f_tolerance && xspread <= options.x_tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d] / static_cast<double>(n);

    const auto xr = point(-1.0, simplex[worst]);
    const double fr = eval(xr);
    if (fr < values[best]) {
      const auto xe = point(-2.0, simplex[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
    } else if (fr < values[second]) {
      simplex[worst] = xr;
      values[worst] = fr;
    } else {
      bool accepted = false;
      if (fr < values[worst]) {
        const auto xc = point(-0.5, simplex[worst]);
        const double fc = eval(xc);
        if (fc <= fr) {
          simplex[worst] = xc;
          values[worst] = fc;
          accepted = true;
        }
      } else {
        const auto xc = point(0.5, simplex[worst]);
        const double fc = eval(xc);
        if (fc < values[worst]) {
          simplex[worst] = xc;
          values[worst] = fc;
          accepted = true;
        }
      }
      if (!accepted) {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < n; ++d)
            simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
          values[i] = eval(simplex[i]);
        }
      }
    }

    if (hook) hook(it, res.value);
    if (res.value < best_seen) {
      best_seen = res.value;
      last_improvement = it;
    } else if (it - last_improvement >= options.stall_window) {
      break;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------

RunResult simplex_optimize_pce(const IsingModel& model, const PceRunConfig& pce,
                               const OptimizerConfig& config, const Minimizer& minimizer) {
  config.validate();
  if (config.shots > 0) throw CapabilityError("PCE runs use exact expectations only");
  const auto t0 = Clock::now();
  const int n = model.size();
  const EncodingMap map = pce_enumerate(pce.pce.qubits, pce.pce.body, n);
  const PceAnsatz ansatz(pce.pce.qubits, pce.pce.body);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<double> x0(static_cast<std::size_t>(ansatz.parameter_count()));
  for (auto& v : x0) v = angle(rng);

  RunResult run;
  run.layout = Layout(static_cast<std::size_t>(n));
  run.qubo_cost = evaluate_ising(model, spins_from_layout(run.layout));
  run.relaxed_cost = std::numeric_limits<double>::infinity();
  bool have_layout = false;
  double last_relaxed = 0.0;

  const Objective objective = [&](std::span<const double> params) {
    const auto raw = pce_expectations(ansatz, map, params);
    const double rc = relaxed_cost(model, raw, pce.step_scale);
    const Layout l = round_raw(raw);
    const double qc = evaluate_ising(model, spins_from_layout(l));
    if (!have_layout || improves(qc, run.qubo_cost)) {
      have_layout = true;
      run.layout = l;
      run.qubo_cost = qc;
    }
    run.relaxed_cost = std::min(run.relaxed_cost, rc);
    last_relaxed = rc;
    return rc;
  };

  MinimizeOptions opts;
  opts.max_iterations = config.max_iterations;
  opts.stall_window = config.stall_window;
  const IterationHook hook = [&](int it, double) {
    TracePoint p{it, last_relaxed, run.qubo_cost, {}};
    if (config.record_layouts) p.layout = run.layout.to_string();
    run.trace.push_back(std::move(p));
  };
  const auto res = minimizer.minimize(objective, x0, opts, hook);
  run.iterations = res.iterations;
  run.wall_seconds = seconds_since(t0);
  return run;
}

// ---------------------------------------------------------------------------

int WarmStart::frozen_count() const {
  return static_cast<int>(std::count(frozen.begin(), frozen.end(), std::uint8_t{1}));
}

double sqoe_angle_for(bool z_positive, bool x_positive, const SqoeTransform& transform) {
  // Pick the angle with the widest sign margin on a fine grid.
  constexpr int kGrid = 4096;
  double best_theta = 0.0;
  double best_margin = -2.0;
  for (int k = 0; k < kGrid; ++k) {
    const double th = kTwoPi * k / kGrid;
    const double z = std::cos(th) * (z_positive ? 1.0 : -1.0);
    const double x = std::sin(transform.x_angle(th)) * (x_positive ? 1.0 : -1.0);
    const double margin = std::min(z, x);
    if (margin > best_margin) {
      best_margin = margin;
      best_theta = th;
    }
  }
  if (!(best_margin > 0.0)) throw ConfigError("no SQOE angle realizes the requested signs");
  return best_theta;
}

WarmStart warm_start(const FarmProblem& problem, const SqoeConfig& sqoe,
                     const WarmStartOptions& options) {
  const int n = problem.sites();
  if (sqoe.variables != n) throw std::invalid_argument("SQOE config does not match the problem size");
  WarmStart ws;
  ws.frozen.assign(static_cast<std::size_t>(n), 0);
  if (options.freeze_avoidance && problem.avoidance)
    for (int i = 0; i < n; ++i)
      if ((*problem.avoidance)[static_cast<std::size_t>(i)] > options.threshold)
        ws.frozen[static_cast<std::size_t>(i)] = 1;

  const int m = problem.max_turbines;
  if (ws.frozen_count() > n - m)
    throw ConfigError("warm start infeasible: " + std::to_string(ws.frozen_count()) +
                      " frozen sites leave fewer than M=" + std::to_string(m) + " free");

  ws.initial = Layout(static_cast<std::size_t>(n));
  if (options.budget_start && m > 0) {
    const QuboMatrix q = assemble_qubo(problem);
    const auto& Q = q.matrix();
    std::vector<double> gain(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) gain[static_cast<std::size_t>(i)] = Q(i, i);
    for (int placed = 0; placed < m; ++placed) {
      int pick = -1;
      for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (ws.frozen[ui] || ws.initial[ui]) continue;
        if (pick < 0 || gain[ui] < gain[static_cast<std::size_t>(pick)]) pick = i;
      }
      ws.initial.set(static_cast<std::size_t>(pick), true);
      for (int j = 0; j < n; ++j) gain[static_cast<std::size_t>(j)] += 2.0 * Q(j, pick);
    }
  }

  ws.theta.resize(static_cast<std::size_t>(sqoe.parameter_count()));
  for (int p = 0; p < sqoe.parameter_count(); ++p) {
    bool z_on = false;
    bool x_on = false;
    for (int v : sqoe.variables_of(p)) {
      const bool on = ws.initial[static_cast<std::size_t>(v)];
      (sqoe.slots[static_cast<std::size_t>(v)].axis == Axis::z ? z_on : x_on) = on;
    }
    ws.theta[static_cast<std::size_t>(p)] = sqoe_angle_for(z_on, x_on, sqoe.transform);
  }
  return ws;
}

std::vector<double> sqoe_gradient(const IsingModel& model, const SqoeConfig& sqoe,
                                  std::span<const double> theta, std::span<const double> raw,
                                  std::span<const int> parameters, std::span<const double> steps,
                                  std::span<const std::uint8_t> frozen) {
  if (parameters.size() != steps.size()) throw std::invalid_argument("one step per parameter");
  std::vector<double> plus(parameters.size());
  std::vector<double> minus(parameters.size());
  for (std::size_t k = 0; k < parameters.size(); ++k) {
    const double th = theta[static_cast<std::size_t>(parameters[k])];
    plus[k] = th + steps[k];
    minus[k] = th - steps[k];
  }
  std::vector<double> pinned(raw.begin(), raw.end());
  pin_frozen(pinned, frozen);
  return gradient_from_readouts(model, sqoe, relax(pinned, sqoe.step_scale), parameters, steps,
                                exact_readout(plus, sqoe.transform),
                                exact_readout(minus, sqoe.transform), frozen);
}

int effective_batch(const SqoeConfig& sqoe, const OptimizerConfig& config) {
  const int params = sqoe.parameter_count();
  int b = config.batch > 0 ? config.batch
                           : std::min(sqoe.qubits, (sqoe.variables + 7) / 8);
  b = std::min({b, params, sqoe.active_qubits()});
  return std::max(b, params > 0 ? 1 : 0);
}

RunResult sgd_optimize_sqoe(const IsingModel& model, const SqoeConfig& sqoe,
                            const OptimizerConfig& config, const WarmStart* start) {
  config.validate();
  const int n = model.size();
  if (sqoe.variables != n) throw std::invalid_argument("SQOE config does not match the model size");
  const auto t0 = Clock::now();
  const int params = sqoe.parameter_count();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);

  std::vector<double> theta(static_cast<std::size_t>(params));
  std::vector<std::uint8_t> frozen(static_cast<std::size_t>(n), 0);
  if (start) {
    if (start->theta.size() != theta.size() || start->frozen.size() != frozen.size())
      throw std::invalid_argument("warm start does not match the SQOE config");
    theta = start->theta;
    frozen = start->frozen;
  } else {
    for (auto& v : theta) v = angle(rng);
  }

  std::vector<int> eligible;
  for (int p = 0; p < params; ++p)
    for (int v : sqoe.variables_of(p))
      if (!frozen[static_cast<std::size_t>(v)]) {
        eligible.push_back(p);
        break;
      }

  const IsingModel scaled = config.normalize_model ? normalized(model) : model;
  const int batch = std::min(effective_batch(sqoe, config), static_cast<int>(eligible.size()));
  const int width = sqoe.active_qubits();

  auto measure = [&](std::span<const double> angles) {
    return sqoe_measure(angles, sqoe.transform, width, config.shots, rng);
  };

  std::vector<double> raw(static_cast<std::size_t>(n));
  {
    std::vector<int> all(static_cast<std::size_t>(params));
    for (int p = 0; p < params; ++p) all[static_cast<std::size_t>(p)] = p;
    write_raw(sqoe, all, measure(theta), raw);
  }
  pin_frozen(raw, frozen);

  RunResult run;
  run.layout = round_raw(raw);
  run.qubo_cost = evaluate_ising(model, spins_from_layout(run.layout));
  run.relaxed_cost = relaxed_cost(model, raw, sqoe.step_scale);
  auto record = [&](int it, double rc, const Layout& current) {
    TracePoint p{it, rc, run.qubo_cost, {}};
    if (config.record_layouts) p.layout = current.to_string();
    run.trace.push_back(std::move(p));
  };
  record(0, run.relaxed_cost, run.layout);

  std::uniform_real_distribution<double> step(config.h_min, config.h_max);
  std::vector<int> chosen(static_cast<std::size_t>(batch));
  std::vector<double> steps(static_cast<std::size_t>(batch));
  std::vector<double> plus(static_cast<std::size_t>(batch));
  std::vector<double> minus(static_cast<std::size_t>(batch));
  std::vector<double> updated(static_cast<std::size_t>(batch));
  int last_improvement = 0;

  for (int it = 1; it <= config.max_iterations && batch > 0; ++it) {
    run.iterations = it;
    // Partial Fisher-Yates: the first `batch` entries become the sample.
    for (int k = 0; k < batch; ++k) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(k), eligible.size() - 1);
      std::swap(eligible[static_cast<std::size_t>(k)], eligible[pick(rng)]);
      chosen[static_cast<std::size_t>(k)] = eligible[static_cast<std::size_t>(k)];
    }
    for (int k = 0; k < batch; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      steps[uk] = step(rng);
      const double th = theta[static_cast<std::size_t>(chosen[uk])];
      plus[uk] = th + steps[uk];
      minus[uk] = th - steps[uk];
    }
    const SlotReadout rp = measure(plus);
    const SlotReadout rm = measure(minus);
    const auto g = gradient_from_readouts(scaled, sqoe, relax(raw, sqoe.step_scale), chosen, steps,
                                          rp, rm, frozen);
    for (int k = 0; k < batch; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      auto& th = theta[static_cast<std::size_t>(chosen[uk])];
      th -= config.learning_rate * g[uk];
      updated[uk] = th;
    }
    write_raw(sqoe, chosen, measure(updated), raw);
    pin_frozen(raw, frozen);

    const double rc = relaxed_cost(model, raw, sqoe.step_scale);
    const Layout current = round_raw(raw);
    const double qc = evaluate_ising(model, spins_from_layout(current));
    bool improved = false;
    if (improves(qc, run.qubo_cost)) {
      run.qubo_cost = qc;
      run.layout = current;
      improved = true;
    }
    if (improves(rc, run.relaxed_cost)) {
      run.relaxed_cost = rc;
      improved = true;
    }
    record(it, rc, current);
    if (improved)
      last_improvement = it;
    else if (it - last_improvement >= config.stall_window)
      break;
  }
  run.wall_seconds = seconds_since(t0);
  return run;
}

}  // namespace wflo
