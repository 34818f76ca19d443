#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "riskbound/g_entropic.hpp"
#include "riskbound/risk_core.hpp"
#include "riskbound/sim.hpp"

namespace riskbound {

// The robustness metric is floored at -0.1, so -rho has essential upper
// bound 0.1. Verification bounds risk measures of -rho against it.
inline constexpr double kRobustnessEssentialBound = 0.1;

// Runs n seeded scenario draws and rollouts under fixed params and
// returns the robustness values. Draw i depends only on (master_seed, i),
// so campaigns parallelize without losing replayability.
SampleSet collect_robustness(const sim::ControllerParams& params,
                             std::size_t n, std::uint64_t master_seed,
                             const sim::SimConfig& config,
                             unsigned workers = 0);

struct VerifyConfig {
  double alpha = 0.1;
  double epsilon = 0.02;
  double gamma = 0.95;
  std::uint64_t seed = 0;
  sim::ControllerParams params;
  sim::SimConfig sim;
  SearchConfig search;
  unsigned workers = 0;
  void validate() const;
};

struct VerificationReport {
  double bound_cvar = 0.0;
  double bound_evar = 0.0;
  BoundResult cvar_detail;
  BoundResult evar_detail;
  std::uint64_t n_used = 0;
  double alpha = 0.0;
  double epsilon = 0.0;
  double gamma = 0.0;
  std::uint64_t master_seed = 0;
  std::vector<double> robustness;  // campaign samples, draw order
};

// Samples N = min_samples(gamma, epsilon) robustness values, negates
// them, and bounds CVaR and EVaR of the negated variable with essential
// bound 0.1.
VerificationReport verify(const VerifyConfig& config);

struct RiskMapQuery {
  sim::ControllerParams params;
  double gamma1 = 0.95;
  double alpha = 0.1;
  std::size_t n_inner = 0;  // 0: use min_samples(gamma1, epsilon_inner)
};

// CVaR bound of -robustness under the queried params: the objective the
// synthesis loop minimizes. Deterministic in (query, epsilon_inner,
// master_seed, sim config).
double riskmap(const RiskMapQuery& query, double epsilon_inner,
               std::uint64_t master_seed, const sim::SimConfig& config,
               const SearchConfig& search = {}, unsigned workers = 0);

// A bound r on CVaR_alpha(-rho) certifies that the expected robustness
// over the worst alpha fraction of scenarios is at least -r.
double expected_shortfall_interpretation(double bound);

// Uniform draw from the admissible gain box.
sim::ControllerParams sample_params(std::mt19937_64& rng);

struct SynthesisConfig {
  double alpha = 0.1;
  double epsilon_inner = 0.02;
  double gamma1 = 0.95;
  double epsilon2 = 0.01;
  double gamma2 = 0.99;
  std::uint64_t seed = 0;
  std::size_t candidates = 0;  // 0: use min_samples(gamma2, epsilon2)
  std::size_t n_inner = 0;     // 0: use min_samples(gamma1, epsilon_inner)
  bool common_random_numbers = false;
  sim::SimConfig sim;
  SearchConfig search;
  unsigned workers = 0;
  void validate() const;
};

struct SynthesisReport {
  sim::ControllerParams best_params;
  double best_riskmap = 0.0;
  std::size_t best_index = 0;
  std::uint64_t candidates_used = 0;
  std::uint64_t n_inner = 0;
  double alpha = 0.0;
  double epsilon_inner = 0.0;
  double gamma1 = 0.0;
  double epsilon2 = 0.0;
  double gamma2 = 0.0;
  std::uint64_t master_seed = 0;
  bool common_random_numbers = false;
  std::vector<double> riskmaps;  // one per candidate, draw order
};

// Percentile synthesis: draws candidate gain vectors uniformly from the
// admissible box and keeps the riskmap minimizer. With the default
// candidate count the winner is in the best epsilon2 fraction of the
// box with confidence gamma2. Each candidate gets a fresh inner batch
// derived from its own gains unless common_random_numbers is set.
SynthesisReport synthesize(const SynthesisConfig& config);

// Same selection loop with a caller-supplied objective in place of the
// simulator riskmap. The objective must be a pure function of the gains.
SynthesisReport synthesize(
    const SynthesisConfig& config,
    const std::function<double(const sim::ControllerParams&)>& objective);

}  // namespace riskbound
