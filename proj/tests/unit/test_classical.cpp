#include <algorithm>
#include <random>

#include "doctest.h"
#include "wflo/classical.hpp"
#include "wflo/errors.hpp"
#include "wflo/presets.hpp"

using namespace wflo;

namespace {

QuboMatrix random_qubo(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  return QuboMatrix(m, u(rng));
}

// Plain scan over every layout with a full evaluation each time.
std::pair<std::uint64_t, double> naive_minimum(const QuboMatrix& q) {
  const int n = q.size();
  std::uint64_t best = 0;
  double best_cost = evaluate_qubo(q, Layout(n));
  for (std::uint64_t idx = 1; idx < (1ULL << n); ++idx) {
    const double c = evaluate_qubo(q, Layout::from_index(idx, n));
    if (c < best_cost) {
      best_cost = c;
      best = idx;
    }
  }
  return {best, best_cost};
}

}  // namespace

TEST_CASE("brute_force trivial instances") {
  const SolveReport zero = brute_force(QuboMatrix(6));
  CHECK(zero.best_cost == 0.0);
  CHECK(zero.best == Layout(6));
  CHECK(zero.optimal);
  CHECK(zero.evaluations == 64);

  const QuboMatrix neg(-Eigen::MatrixXd::Identity(7, 7), 0.0);
  const SolveReport all = brute_force(neg);
  CHECK(all.best.count() == 7);
  CHECK(all.best_cost == -7.0);

  CHECK_THROWS_AS(brute_force(QuboMatrix(kMaxExhaustiveSites + 1)), CapabilityError);
}

TEST_CASE("brute_force equals naive enumeration") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const QuboMatrix q = random_qubo(12, rng);
    const auto [idx, cost] = naive_minimum(q);
    const SolveReport r = brute_force(q, 1 + trial % 4);
    CHECK(r.best.to_index() == idx);
    CHECK(r.best_cost == doctest::Approx(cost).epsilon(1e-12));
  }
}

TEST_CASE("brute_force result does not depend on the thread count") {
  std::mt19937_64 rng(12);
  const QuboMatrix q = random_qubo(16, rng);
  const SolveReport one = brute_force(q, 1);
  for (int t : {2, 3, 8, 0}) {
    const SolveReport r = brute_force(q, t);
    CHECK(r.best == one.best);
    CHECK(r.best_cost == one.best_cost);
  }
}

TEST_CASE("brute_force_ranked") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const QuboMatrix q = random_qubo(9, rng);
    std::vector<double> costs;
    for (std::uint64_t idx = 0; idx < 512; ++idx) costs.push_back(evaluate_qubo(q, Layout::from_index(idx, 9)));
    std::sort(costs.begin(), costs.end());
    const RankedSolutions r = brute_force_ranked(q);
    CHECK(r.best_cost == doctest::Approx(costs[0]).epsilon(1e-12));
    REQUIRE(r.runner_up.has_value());
    CHECK(r.runner_up_cost == doctest::Approx(costs[1]).epsilon(1e-12));
    CHECK(evaluate_qubo(q, *r.runner_up) == doctest::Approx(r.runner_up_cost).epsilon(1e-12));
  }
  CHECK_FALSE(brute_force_ranked(QuboMatrix(3)).runner_up.has_value());
}

TEST_CASE("windfarm A L=4 exhaustive optimum has 16 turbines") {
  const FarmProblem p = load_preset("windfarm_a", 4);
  const SolveReport r = brute_force(assemble_qubo(p));
  CHECK(r.best.count() == 16);
  CHECK(r.optimal);
  CHECK(layout_power(p, r.best) > 0.0);
}

TEST_CASE("simulated_annealing") {
  const SolveReport zero = simulated_annealing(QuboMatrix(8), {}, 1);
  CHECK(zero.best_cost == 0.0);
  CHECK_FALSE(zero.optimal);

  std::mt19937_64 rng(14);
  for (int instance = 0; instance < 5; ++instance) {
    const int n = 10 + 2 * instance;
    const QuboMatrix q = random_qubo(n, rng);
    const SolveReport exact = brute_force(q);
    int matches = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const SolveReport sa = simulated_annealing(q, {}, seed);
      CHECK(sa.best_cost >= exact.best_cost - 1e-9);
      CHECK(sa.best_cost == doctest::Approx(evaluate_qubo(q, sa.best)).epsilon(1e-12));
      matches += std::abs(sa.best_cost - exact.best_cost) < 1e-9 ? 1 : 0;
    }
    CHECK(matches >= 18);
  }

  const QuboMatrix q = random_qubo(14, rng);
  const SolveReport a = simulated_annealing(q, {}, 99);
  const SolveReport b = simulated_annealing(q, {}, 99);
  CHECK(a.best == b.best);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("check_validity") {
  const FarmProblem a = load_preset("windfarm_a", 4);
  const Layout full = Layout::from_index(0xFFFF, 16);
  CHECK(check_validity(a, full).valid());

  FarmProblem fifteen = a;
  fifteen.max_turbines = 15;
  const auto over = check_validity(fifteen, full);
  CHECK_FALSE(over.valid());
  CHECK(over.turbines == 16);
  CHECK_FALSE(over.count_matches);

  FarmProblem spaced = load_preset("alltwalis", 7);
  Layout pair(49);
  int free_a = -1;
  for (int i = 0; i + 1 < 49; ++i)
    if ((*spaced.avoidance)[i] < 0.5 && (*spaced.avoidance)[i + 1] < 0.5 && (i + 1) % 7 != 0) {
      free_a = i;
      break;
    }
  REQUIRE(free_a >= 0);
  pair.set(free_a, true);
  pair.set(free_a + 1, true);
  const auto v = check_validity(spaced, pair);
  REQUIRE(v.spacing_violations.size() == 1);
  CHECK(v.spacing_violations[0] == std::pair<int, int>{free_a, free_a + 1});
  CHECK(v.turbines == 2);

  Layout blocked(49);
  int site = 0;
  while ((*spaced.avoidance)[site] < 0.5) ++site;
  blocked.set(site, true);
  CHECK(check_validity(spaced, blocked).occupied_avoidance_sites == std::vector<int>{site});

  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    Layout x(49);
    for (int i = 0; i < 49; ++i) x.set(i, rng() % 2);
    CHECK(check_validity(spaced, x).turbines == x.count());
  }
}
