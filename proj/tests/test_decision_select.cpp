#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "riskbound/decision_select.hpp"

using namespace riskbound;

namespace {

DecisionDomain<double> scalar_domain() {
  DecisionDomain<double> d;
  d.sample = [](std::uint64_t seed) {
    auto rng = make_rng(seed);
    return uniform_real(rng, 0.0, 1.0);
  };
  d.reward = [](const double& x) { return x; };
  return d;
}

}  // namespace

TEST_CASE("tsp geometry") {
  TspInstance square;
  square.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(tsp_cost(square, {0, 1, 2, 3}) == doctest::Approx(4.0).epsilon(1e-14));
  // Crossing diagonals: 2 + 2*sqrt(2).
  CHECK(tsp_cost(square, {0, 2, 1, 3}) ==
        doctest::Approx(2.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(tsp_cost(square, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(tsp_cost(square, {0, 1, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(tsp_cost(square, {0, 1, 2, 4}), std::invalid_argument);

  TspInstance tiny;
  tiny.nodes = {{0, 0}};
  CHECK_THROWS_AS(tiny.validate(), std::invalid_argument);

  const TspInstance inst = random_tsp_instance(6, 99);
  CHECK(inst.nodes.size() == 6);
  for (auto [x, y] : inst.nodes) {
    CHECK(std::abs(x) <= 5.0);
    CHECK(std::abs(y) <= 5.0);
  }
  // Tour cost is rotation and reflection invariant.
  const std::vector<int> tour{2, 4, 0, 1, 5, 3};
  std::vector<int> rotated{0, 1, 5, 3, 2, 4};
  std::vector<int> reversed(tour.rbegin(), tour.rend());
  const double c = tsp_cost(inst, tour);
  CHECK(tsp_cost(inst, rotated) == doctest::Approx(c).epsilon(1e-14));
  CHECK(tsp_cost(inst, reversed) == doctest::Approx(c).epsilon(1e-14));
}

TEST_CASE("uniform permutation draws every tour equally often") {
  // 4! = 24 cells; chi-square with 23 dof at p = 0.001 is 49.728.
  const int trials = 24000;
  std::map<std::vector<int>, int> counts;
  for (int t = 0; t < trials; ++t)
    counts[uniform_permutation(4, 1000 + t)]++;
  CHECK(counts.size() == 24);
  const double expect = trials / 24.0;
  double chi2 = 0.0;
  for (const auto& [perm, c] : counts)
    chi2 += (c - expect) * (c - expect) / expect;
  CHECK(chi2 < 49.728);

  const auto p = uniform_permutation(9, 5);
  std::vector<int> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 9; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("exhaustive tour enumeration") {
  const TspInstance inst = random_tsp_instance(5, 7);
  const auto all = tsp_all_costs(inst);
  CHECK(all.size() == 24);  // (n-1)! with the first node pinned
  // Every sampled tour's cost appears in the enumeration.
  for (int t = 0; t < 20; ++t) {
    const double c = tsp_cost(inst, uniform_permutation(5, 300 + t));
    const bool found = std::any_of(all.begin(), all.end(), [&](double v) {
      return std::abs(v - c) < 1e-9;
    });
    CHECK(found);
  }
  // Violation fraction agrees with counting strictly shorter tours in
  // the enumeration. Fixing the first node is valid because each
  // rotation class has exactly one representative there.
  for (int t = 0; t < 10; ++t) {
    const auto tour = uniform_permutation(5, 900 + t);
    const double c = tsp_cost(inst, tour);
    const double frac =
        static_cast<double>(std::count_if(all.begin(), all.end(),
                                          [&](double v) { return v < c; })) /
        static_cast<double>(all.size());
    CHECK(tsp_exact_violation(inst, tour) == frac);
  }
  TspInstance big;
  big.nodes.assign(11, {0.0, 0.0});
  CHECK_THROWS_AS(tsp_all_costs(big), std::invalid_argument);
}

TEST_CASE("selection meets the sample size table and is deterministic") {
  const auto domain = scalar_domain();
  const auto rep = good_decision(domain, {0.01, 0.95}, 42);
  CHECK(rep.samples_used == 299);
  CHECK(rep.rewards.size() == 299);
  CHECK(rep.best_reward ==
        *std::max_element(rep.rewards.begin(), rep.rewards.end()));
  CHECK(rep.best_reward == rep.best_decision);  // identity reward

  const auto rep2 = good_decision(domain, {0.01, 0.95}, 42);
  CHECK(rep2.best_decision == rep.best_decision);
  CHECK(rep2.rewards == rep.rewards);

  const auto other = good_decision(domain, {0.01, 0.95}, 43);
  CHECK(other.best_decision != rep.best_decision);

  // Workers must not change the draw or the winner.
  const auto par = good_decision_n(domain, 299, 0.01, 0.95, 42, 4);
  CHECK(par.rewards == rep.rewards);
  CHECK(par.best_decision == rep.best_decision);
}

TEST_CASE("constant rewards keep the earliest candidate") {
  DecisionDomain<std::uint64_t> d;
  d.sample = [](std::uint64_t seed) { return seed; };
  d.reward = [](const std::uint64_t&) { return 1.0; };
  const auto rep = good_decision_n(d, 50, 0.1, 0.9, 7);
  CHECK(rep.best_decision == derive_seed(7, 0x6b9d, 0));
  CHECK(rep.best_reward == 1.0);
}

TEST_CASE("violation volume estimate") {
  const auto domain = scalar_domain();
  // Nothing beats the top of the support.
  CHECK(violation_volume_estimate(domain, 1.0, 2000, 5) == 0.0);
  // Everything beats the bottom.
  CHECK(violation_volume_estimate(domain, -1.0, 2000, 5) == 1.0);
  // The median is beaten about half the time.
  const double mid = violation_volume_estimate(domain, 0.5, 4000, 5);
  CHECK(mid > 0.45);
  CHECK(mid < 0.55);
  // Deterministic in the seed.
  CHECK(violation_volume_estimate(domain, 0.5, 4000, 5) == mid);
  CHECK_THROWS_AS(violation_volume_estimate(domain, 0.5, 0, 5),
                  std::invalid_argument);
}

TEST_CASE("selected tours beat the tail of the tour distribution") {
  // With n = min_samples({0.05, 0.9}) = 45 draws, the winner is in the
  // top 5% with 90% confidence. Check the exact violation fraction on a
  // small instance where enumeration is cheap.
  const TspInstance inst = random_tsp_instance(7, 31);
  const auto domain = tsp_domain(inst);
  int ok = 0;
  const int campaigns = 40;
  for (int k = 0; k < campaigns; ++k) {
    const auto rep = good_decision(domain, {0.05, 0.9}, 1000 + k);
    CHECK(rep.samples_used == 45);
    if (tsp_exact_violation(inst, rep.best_decision) <= 0.05) ++ok;
  }
  // Failure probability per campaign is at most 10%; 40 campaigns with
  // fewer than 28 successes would be a 5-sigma event.
  CHECK(ok >= 28);
}
