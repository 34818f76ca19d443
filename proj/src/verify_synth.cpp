#include "riskbound/verify_synth.hpp"

#include <bit>
#include <cmath>

#include "riskbound/decision_select.hpp"
#include "riskbound/errors.hpp"
#include "riskbound/rng.hpp"

namespace riskbound {

namespace {

constexpr std::uint64_t kDrawStream = 0x7a11;
constexpr std::uint64_t kInnerStream = 0x3f29;

std::uint64_t hash_params(const sim::ControllerParams& p) {
  std::uint64_t h = mix64(std::bit_cast<std::uint64_t>(p.p1));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(p.p2));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(p.p3));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(p.p4));
  return h;
}

}  // namespace

SampleSet collect_robustness(const sim::ControllerParams& params,
                             std::size_t n, std::uint64_t master_seed,
                             const sim::SimConfig& config, unsigned workers) {
  require(n >= 1, "collect_robustness: need at least one draw");
  params.validate();
  config.validate();
  require(config.horizon >= sim::kMetricHorizon,
          "collect_robustness: horizon must cover the scored window");
  std::vector<double> values(n);
  parallel_for(n, workers, [&](std::size_t i) {
    const sim::ScenarioDraw draw =
        sim::draw_scenario(derive_seed(master_seed, kDrawStream, i));
    values[i] = sim::robustness(sim::rollout(draw, params, config));
  });
  return SampleSet(std::move(values));
}

void VerifyConfig::validate() const {
  ConfidenceSpec{epsilon, gamma}.validate();
  require(alpha > 0.0 && alpha <= 1.0, "VerifyConfig: alpha must lie in (0, 1]");
  params.validate();
  sim.validate();
  search.validate();
}

VerificationReport verify(const VerifyConfig& config) {
  config.validate();
  const std::uint64_t n = min_samples({config.epsilon, config.gamma});
  const SampleSet rho = collect_robustness(config.params, n, config.seed,
                                           config.sim, config.workers);
  std::vector<double> negated;
  negated.reserve(rho.size());
  for (double v : rho.values()) negated.push_back(-v);
  const SampleSet neg(std::move(negated));
  const EssentialBound ell{kRobustnessEssentialBound};

  VerificationReport report;
  report.cvar_detail =
      bound_cvar(neg, ell, config.alpha, config.epsilon, config.search);
  report.evar_detail =
      bound_evar(neg, ell, config.alpha, config.epsilon, config.search);
  report.bound_cvar = report.cvar_detail.bound;
  report.bound_evar = report.evar_detail.bound;
  report.n_used = n;
  report.alpha = config.alpha;
  report.epsilon = config.epsilon;
  report.gamma = config.gamma;
  report.master_seed = config.seed;
  report.robustness = rho.values();
  return report;
}

double riskmap(const RiskMapQuery& query, double epsilon_inner,
               std::uint64_t master_seed, const sim::SimConfig& config,
               const SearchConfig& search, unsigned workers) {
  require(epsilon_inner >= 0.0 && epsilon_inner < 1.0,
          "riskmap: epsilon_inner must lie in [0, 1)");
  std::size_t n = query.n_inner;
  if (epsilon_inner > 0.0) {
    const std::uint64_t floor = min_samples({epsilon_inner, query.gamma1});
    if (n == 0) n = floor;
    require(n >= floor, "riskmap: n_inner below the sample-complexity floor");
  } else {
    require(n >= 1, "riskmap: n_inner required when epsilon_inner is 0");
  }
  const SampleSet rho =
      collect_robustness(query.params, n, master_seed, config, workers);
  std::vector<double> negated;
  negated.reserve(rho.size());
  for (double v : rho.values()) negated.push_back(-v);
  return bound_cvar(SampleSet(std::move(negated)),
                    EssentialBound{kRobustnessEssentialBound}, query.alpha,
                    epsilon_inner, search)
      .bound;
}

double expected_shortfall_interpretation(double bound) { return -bound; }

sim::ControllerParams sample_params(std::mt19937_64& rng) {
  sim::ControllerParams p;
  p.p1 = uniform_real(rng, sim::kGainMin, sim::kGainMax);
  p.p2 = uniform_real(rng, sim::kGainMin, sim::kGainMax);
  p.p3 = uniform_real(rng, sim::kGainMin, sim::kGainMax);
  p.p4 = uniform_real(rng, sim::kBrakeMin, sim::kBrakeMax);
  return p;
}

void SynthesisConfig::validate() const {
  ConfidenceSpec{epsilon_inner, gamma1}.validate();
  ConfidenceSpec{epsilon2, gamma2}.validate();
  require(alpha > 0.0 && alpha <= 1.0,
          "SynthesisConfig: alpha must lie in (0, 1]");
  sim.validate();
  search.validate();
}

SynthesisReport synthesize(
    const SynthesisConfig& config,
    const std::function<double(const sim::ControllerParams&)>& objective) {
  require(static_cast<bool>(objective), "synthesize: empty objective");
  config.validate();
  const std::uint64_t n_cand =
      config.candidates ? config.candidates
                        : min_samples({config.epsilon2, config.gamma2});
  const std::uint64_t floor = min_samples({config.epsilon_inner, config.gamma1});
  const std::uint64_t n_inner = config.n_inner ? config.n_inner : floor;
  require(n_inner >= floor,
          "synthesize: n_inner below the sample-complexity floor");

  DecisionDomain<sim::ControllerParams> domain;
  domain.sample = [](std::uint64_t seed) {
    auto rng = make_rng(seed);
    return sample_params(rng);
  };
  domain.reward = [&](const sim::ControllerParams& p) { return -objective(p); };

  const SelectionReport<sim::ControllerParams> sel = good_decision_n(
      domain, n_cand, config.epsilon2, config.gamma2, config.seed,
      config.workers);

  SynthesisReport report;
  report.best_params = sel.best_decision;
  report.best_riskmap = -sel.best_reward;
  report.candidates_used = sel.samples_used;
  report.n_inner = n_inner;
  report.alpha = config.alpha;
  report.epsilon_inner = config.epsilon_inner;
  report.gamma1 = config.gamma1;
  report.epsilon2 = config.epsilon2;
  report.gamma2 = config.gamma2;
  report.master_seed = config.seed;
  report.common_random_numbers = config.common_random_numbers;
  report.riskmaps.reserve(sel.rewards.size());
  for (double r : sel.rewards) report.riskmaps.push_back(-r);
  for (std::size_t i = 0; i < report.riskmaps.size(); ++i) {
    if (report.riskmaps[i] == report.best_riskmap) {
      report.best_index = i;
      break;
    }
  }
  return report;
}

SynthesisReport synthesize(const SynthesisConfig& config) {
  config.validate();
  const std::uint64_t n_inner =
      config.n_inner ? config.n_inner
                     : min_samples({config.epsilon_inner, config.gamma1});

  // Inner batches: fresh per candidate (keyed by the gains themselves,
  // so the map stays a pure function of (params, master seed)) or shared
  // across candidates when variance reduction is wanted.
  auto inner_seed = [&config](const sim::ControllerParams& p) {
    if (config.common_random_numbers)
      return derive_seed(config.seed, kInnerStream);
    return derive_seed(config.seed, kInnerStream, hash_params(p));
  };

  return synthesize(config, [&](const sim::ControllerParams& p) {
    RiskMapQuery query{p, config.gamma1, config.alpha, n_inner};
    return riskmap(query, config.epsilon_inner, inner_seed(p), config.sim,
                   config.search, 1);
  });
}

}  // namespace riskbound
