#include "riskbound/decision_select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace riskbound {

void TspInstance::validate() const {
  require(nodes.size() >= 2, "TspInstance: need at least 2 nodes");
  for (const auto& [x, y] : nodes)
    require(std::isfinite(x) && std::isfinite(y),
            "TspInstance: node coordinates must be finite");
}

TspInstance random_tsp_instance(std::size_t n, std::uint64_t seed) {
  require(n >= 2, "random_tsp_instance: need at least 2 nodes");
  auto rng = make_rng(seed);
  TspInstance inst;
  inst.nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = uniform_real(rng, -5.0, 5.0);
    const double y = uniform_real(rng, -5.0, 5.0);
    inst.nodes.emplace_back(x, y);
  }
  return inst;
}

double tsp_cost(const TspInstance& instance, const std::vector<int>& tour) {
  instance.validate();
  const std::size_t n = instance.nodes.size();
  require(tour.size() == n, "tsp_cost: tour must visit every node once");
  std::vector<char> seen(n, 0);
  for (int idx : tour) {
    require(idx >= 0 && static_cast<std::size_t>(idx) < n,
            "tsp_cost: node index out of range");
    require(!seen[idx], "tsp_cost: node visited twice");
    seen[idx] = 1;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = instance.nodes[tour[i]];
    const auto& b = instance.nodes[tour[(i + 1) % n]];
    total += std::hypot(a.first - b.first, a.second - b.second);
  }
  return total;
}

std::vector<int> uniform_permutation(std::size_t n, std::uint64_t seed) {
  require(n >= 1, "uniform_permutation: n must be positive");
  auto rng = make_rng(seed);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i-- > 1;) {
    const std::uint64_t j = uniform_below(rng, i + 1);
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

DecisionDomain<std::vector<int>> tsp_domain(const TspInstance& instance) {
  instance.validate();
  DecisionDomain<std::vector<int>> domain;
  const std::size_t n = instance.nodes.size();
  domain.sample = [n](std::uint64_t seed) { return uniform_permutation(n, seed); };
  domain.reward = [instance](const std::vector<int>& tour) {
    return -tsp_cost(instance, tour);
  };
  return domain;
}

std::vector<double> tsp_all_costs(const TspInstance& instance) {
  instance.validate();
  const std::size_t n = instance.nodes.size();
  require(n <= 10, "tsp_all_costs: enumeration capped at 10 nodes");
  // Cost is rotation invariant, so fixing the first node covers every
  // distinct cost with multiplicity (n-1)!/n! of the full space.
  std::vector<int> tour(n);
  std::iota(tour.begin(), tour.end(), 0);
  std::vector<double> costs;
  do {
    costs.push_back(tsp_cost(instance, tour));
  } while (std::next_permutation(tour.begin() + 1, tour.end()));
  return costs;
}

double tsp_exact_violation(const TspInstance& instance,
                           const std::vector<int>& tour) {
  const double cost = tsp_cost(instance, tour);
  const std::vector<double> costs = tsp_all_costs(instance);
  std::uint64_t shorter = 0;
  for (double c : costs)
    if (c < cost) ++shorter;
  return static_cast<double>(shorter) / static_cast<double>(costs.size());
}

}  // namespace riskbound
