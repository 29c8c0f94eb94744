#include "wflo/classical.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "wflo/errors.hpp"

namespace wflo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double tie_tolerance(double cost) { return 1e-9 * std::max(1.0, std::abs(cost)); }

// Running best / runner-up over distinct cost levels. Lower index wins ties.
struct Ranking {
  bool has_best = false;
  double best = 0.0;
  std::uint64_t best_index = 0;
  bool has_second = false;
  double second = 0.0;
  std::uint64_t second_index = 0;

  void offer(double cost, std::uint64_t index) {
    if (!has_best) {
      has_best = true;
      best = cost;
      best_index = index;
      return;
    }
    const double tol = tie_tolerance(best);
    if (cost < best - tol) {
      has_second = true;
      second = best;
      second_index = best_index;
      best = cost;
      best_index = index;
    } else if (cost <= best + tol) {
      if (index < best_index) {
        best = cost;
        best_index = index;
      }
    } else {
      offer_second(cost, index);
    }
  }

  void offer_second(double cost, std::uint64_t index) {
    if (!has_second || cost < second - tie_tolerance(second) ||
        (cost <= second + tie_tolerance(second) && index < second_index)) {
      has_second = true;
      second = cost;
      second_index = index;
    }
  }

  void merge(const Ranking& o) {
    if (o.has_best) offer(o.best, o.best_index);
    if (o.has_second) offer(o.second, o.second_index);
  }
};

// Enumerates all layouts whose top `fixed_bits` bits equal `prefix`,
// visiting the low bits in Gray-code order.
Ranking enumerate_chunk(const Eigen::MatrixXd& q, int n, int free_bits, std::uint64_t prefix) {
  std::vector<std::uint8_t> x(static_cast<std::size_t>(n), 0);
  std::uint64_t index = prefix << free_bits;
  for (int i = free_bits; i < n; ++i) x[static_cast<std::size_t>(i)] = (index >> i) & 1U;

  // field[i] = sum_{j != i} Q_ij x_j
  std::vector<double> field(static_cast<std::size_t>(n), 0.0);
  double cost = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (j != i && x[static_cast<std::size_t>(j)]) field[static_cast<std::size_t>(i)] += q(i, j);
    if (x[static_cast<std::size_t>(i)]) cost += q(i, i) + field[static_cast<std::size_t>(i)];
  }

  Ranking r;
  r.offer(cost, index);
  const std::uint64_t steps = std::uint64_t{1} << free_bits;
  for (std::uint64_t k = 1; k < steps; ++k) {
    const int i = std::countr_zero(k);
    const auto ui = static_cast<std::size_t>(i);
    const double sign = x[ui] ? -1.0 : 1.0;
    cost += sign * (q(i, i) + 2.0 * field[ui]);
    x[ui] ^= 1U;
    index ^= std::uint64_t{1} << i;
    for (int j = 0; j < n; ++j)
      if (j != i) field[static_cast<std::size_t>(j)] += sign * q(j, i);
    r.offer(cost, index);
  }
  return r;
}

Ranking enumerate_all(const QuboMatrix& q, int threads) {
  const int n = q.size();
  if (n > kMaxExhaustiveSites)
    throw CapabilityError("exhaustive search supports N <= 24, got N=" + std::to_string(n));
  if (n == 0) {
    Ranking r;
    r.offer(0.0, 0);
    return r;
  }
  // Chunking is fixed so the result is independent of the thread count.
  const int fixed_bits = std::min(4, n);
  const int free_bits = n - fixed_bits;
  const std::uint64_t chunks = std::uint64_t{1} << fixed_bits;

  if (threads <= 0) threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), chunks));

  std::vector<Ranking> results(chunks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++)
      results[c] = enumerate_chunk(q.matrix(), n, free_bits, c);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  Ranking total;
  for (const auto& r : results) total.merge(r);
  return total;
}

}  // namespace

SolveReport brute_force(const QuboMatrix& q, int threads) {
  const auto t0 = Clock::now();
  const Ranking r = enumerate_all(q, threads);
  SolveReport rep;
  rep.best = Layout::from_index(r.best_index, static_cast<std::size_t>(q.size()));
  rep.best_cost = evaluate_qubo(q, rep.best);
  rep.optimal = true;
  rep.evaluations = std::uint64_t{1} << q.size();
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

RankedSolutions brute_force_ranked(const QuboMatrix& q, int threads) {
  const Ranking r = enumerate_all(q, threads);
  const auto n = static_cast<std::size_t>(q.size());
  RankedSolutions out;
  out.best = Layout::from_index(r.best_index, n);
  out.best_cost = evaluate_qubo(q, out.best);
  if (r.has_second) {
    out.runner_up = Layout::from_index(r.second_index, n);
    out.runner_up_cost = evaluate_qubo(q, *out.runner_up);
  }
  return out;
}

SolveReport simulated_annealing(const QuboMatrix& q, const AnnealSchedule& schedule,
                                std::uint64_t seed) {
  if (schedule.sweeps < 0) throw std::invalid_argument("sweep count must be >= 0");
  if (!(schedule.decay > 0.0 && schedule.decay <= 1.0))
    throw std::invalid_argument("temperature decay must lie in (0,1]");
  const auto t0 = Clock::now();
  const int n = q.size();
  const auto& m = q.matrix();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, std::max(0, n - 1));

  std::vector<std::uint8_t> x(static_cast<std::size_t>(n));
  for (auto& b : x) b = uni(rng) < 0.5 ? 1 : 0;
  std::vector<double> field(static_cast<std::size_t>(n), 0.0);
  double cost = q.offset();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (j != i && x[static_cast<std::size_t>(j)]) field[static_cast<std::size_t>(i)] += m(i, j);
    if (x[static_cast<std::size_t>(i)]) cost += m(i, i) + field[static_cast<std::size_t>(i)];
  }

  double temperature = schedule.initial_temperature.value_or(n > 0 ? m.cwiseAbs().maxCoeff() : 1.0);
  if (!(temperature > 0.0)) temperature = 1.0;

  std::vector<std::uint8_t> best = x;
  double best_cost = cost;
  std::uint64_t evaluations = 1;
  for (int sweep = 0; sweep < schedule.sweeps && n > 0; ++sweep) {
    for (int step = 0; step < n; ++step) {
      const int i = pick(rng);
      const auto ui = static_cast<std::size_t>(i);
      const double sign = x[ui] ? -1.0 : 1.0;
      const double delta = sign * (m(i, i) + 2.0 * field[ui]);
      ++evaluations;
      if (delta > 0.0 && uni(rng) >= std::exp(-delta / temperature)) continue;
      x[ui] ^= 1U;
      cost += delta;
      for (int j = 0; j < n; ++j)
        if (j != i) field[static_cast<std::size_t>(j)] += sign * m(j, i);
      if (cost < best_cost) {
        best_cost = cost;
        best = x;
      }
    }
    temperature *= schedule.decay;
  }

  SolveReport rep;
  rep.best = Layout(best);
  rep.best_cost = evaluate_qubo(q, rep.best);
  rep.optimal = false;
  rep.evaluations = evaluations;
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

ValidityRecord check_validity(const FarmProblem& problem, const Layout& layout,
                              double avoidance_threshold) {
  const int n = problem.sites();
  if (static_cast<int>(layout.size()) != n)
    throw std::invalid_argument("layout length does not match the grid");
  ValidityRecord r;
  r.turbines = layout.count();
  r.count_matches = r.turbines == problem.max_turbines;
  if (problem.min_spacing) {
    for (int i = 0; i < n; ++i) {
      if (!layout[i]) continue;
      const Point a = site_position(problem.grid, i);
      for (int j = i + 1; j < n; ++j) {
        if (!layout[j]) continue;
        const Point b = site_position(problem.grid, j);
        if (std::hypot(a.x - b.x, a.y - b.y) < *problem.min_spacing) r.spacing_violations.emplace_back(i, j);
      }
    }
  }
  if (problem.avoidance)
    for (int i = 0; i < n; ++i)
      if (layout[i] && (*problem.avoidance)[static_cast<std::size_t>(i)] > avoidance_threshold)
        r.occupied_avoidance_sites.push_back(i);
  return r;
}

}  // namespace wflo
