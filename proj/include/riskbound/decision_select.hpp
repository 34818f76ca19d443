#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "riskbound/errors.hpp"
#include "riskbound/rng.hpp"
#include "riskbound/risk_core.hpp"

namespace riskbound {

// A decision problem the percentile machinery can sample: draw a random
// candidate from the decision distribution, and score any candidate.
// Both callbacks must be pure functions of their arguments.
template <typename D>
struct DecisionDomain {
  std::function<D(std::uint64_t seed)> sample;
  std::function<double(const D&)> reward;
};

template <typename D>
struct SelectionReport {
  D best_decision{};
  double best_reward = 0.0;
  std::uint64_t samples_used = 0;
  double epsilon = 0.0;
  double gamma = 0.0;
  std::vector<double> rewards;  // one per candidate, in draw order
};

// Draws n candidates and keeps the reward maximizer (earliest draw wins
// ties). With n = min_samples({epsilon, gamma}) the winner is in the
// top epsilon fraction of the decision distribution with confidence
// at least gamma.
template <typename D>
SelectionReport<D> good_decision_n(const DecisionDomain<D>& domain,
                                   std::uint64_t n, double epsilon,
                                   double gamma, std::uint64_t master_seed,
                                   unsigned workers = 0) {
  require(static_cast<bool>(domain.sample) && static_cast<bool>(domain.reward),
          "good_decision: domain callbacks must be set");
  require(n >= 1, "good_decision: need at least one candidate");
  std::vector<D> decisions(n);
  std::vector<double> rewards(n);
  parallel_for(
      n, workers,
      [&](std::size_t i) {
        decisions[i] = domain.sample(derive_seed(master_seed, 0x6b9d, i));
        rewards[i] = domain.reward(decisions[i]);
      });
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (rewards[i] > rewards[best]) best = i;
  SelectionReport<D> report;
  report.best_decision = decisions[best];
  report.best_reward = rewards[best];
  report.samples_used = n;
  report.epsilon = epsilon;
  report.gamma = gamma;
  report.rewards = std::move(rewards);
  return report;
}

template <typename D>
SelectionReport<D> good_decision(const DecisionDomain<D>& domain,
                                 const ConfidenceSpec& spec,
                                 std::uint64_t master_seed,
                                 unsigned workers = 0) {
  return good_decision_n(domain, min_samples(spec), spec.epsilon, spec.gamma,
                         master_seed, workers);
}

// Monte Carlo estimate of the violation fraction: the probability that a
// fresh draw from the decision distribution strictly beats `decision`.
template <typename D>
double violation_volume_estimate(const DecisionDomain<D>& domain,
                                 const D& decision, std::uint64_t trials,
                                 std::uint64_t master_seed,
                                 unsigned workers = 0) {
  require(trials >= 1, "violation_volume_estimate: need at least one trial");
  const double base = domain.reward(decision);
  std::vector<unsigned char> beats(trials, 0);
  parallel_for(
      trials, workers,
      [&](std::size_t i) {
        const D other = domain.sample(derive_seed(master_seed, 0x51ae, i));
        beats[i] = domain.reward(other) > base ? 1 : 0;
      });
  std::uint64_t count = 0;
  for (unsigned char b : beats) count += b;
  return static_cast<double>(count) / static_cast<double>(trials);
}

// Planar travelling-salesman instance used as the discrete demo domain.
struct TspInstance {
  std::vector<std::pair<double, double>> nodes;
  void validate() const;
};

TspInstance random_tsp_instance(std::size_t n, std::uint64_t seed);

// Closed-tour length for a permutation of all node indices.
double tsp_cost(const TspInstance& instance, const std::vector<int>& tour);

// Fisher-Yates draw, uniform over all n! permutations.
std::vector<int> uniform_permutation(std::size_t n, std::uint64_t seed);

// Decision domain whose reward is the negated tour length.
DecisionDomain<std::vector<int>> tsp_domain(const TspInstance& instance);

// Every closed-tour cost with the first node fixed; (n-1)! entries.
// Only feasible for small instances.
std::vector<double> tsp_all_costs(const TspInstance& instance);

// Exact violation fraction for a tour: share of the n! tours that are
// strictly shorter.
double tsp_exact_violation(const TspInstance& instance,
                           const std::vector<int>& tour);

}  // namespace riskbound
