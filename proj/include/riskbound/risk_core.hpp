#pragma once

#include <cstdint>
#include <vector>

namespace riskbound {

// Finite multiset of scalar draws. Values must be finite; the set keeps
// insertion order but caches min/max.
class SampleSet {
 public:
  explicit SampleSet(std::vector<double> values);
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }
  double mean() const;

 private:
  std::vector<double> values_;
  double min_ = 0.0;
  double max_ = 0.0;
};

struct ConfidenceSpec {
  double epsilon = 0.0;  // tolerated tail mass, in (0, 1)
  double gamma = 0.0;    // required confidence, in [0, 1)
  void validate() const;
};

// Essential upper bound: P[x <= ell] = 1 for the variable being bounded.
struct EssentialBound {
  double ell = 0.0;
  void validate() const;
};

// Largest observed value. With N samples it upper-bounds the (1-eps)
// quantile with confidence var_bound_confidence(N, eps).
double scenario_max(const SampleSet& samples);

// 1 - (1 - epsilon)^n, the confidence that the sample max dominates the
// (1 - epsilon) quantile.
double var_bound_confidence(std::uint64_t n, double epsilon);

// Smallest N with var_bound_confidence(N, epsilon) >= gamma.
std::uint64_t min_samples(const ConfidenceSpec& spec);

// Confidence from the binomial tail when d support constraints out of n
// samples determine the bound: 1 - sum_{i<d} C(n,i) eps^i (1-eps)^(n-i)
// is the usual scenario statement; this returns the sum itself.
double scenario_confidence_general(std::uint64_t n, std::uint64_t d,
                                   double epsilon);

// Mean bound from a quantile bound: zeta * (1 - epsilon) + ell * epsilon.
double expectation_bound(double zeta, const EssentialBound& bound,
                         double epsilon);

// Smallest sample value whose empirical CDF reaches 1 - epsilon.
double empirical_var(const SampleSet& samples, double epsilon);

// Empirical CVaR at level alpha: inf over z of
// z + mean(max(x - z, 0)) / alpha, attained at a sample value.
double empirical_cvar(const SampleSet& samples, double alpha);

struct EvarSearch {
  double z_min = 1e-4;
  double z_max = 1e4;
  int grid_points = 200;
  double rel_tol = 1e-8;
  void validate() const;
};

// Empirical EVaR at level alpha: inf over z > 0 of
// (log mean(exp(z x)) - log alpha) / z, searched on a log-spaced grid
// and refined by golden section. At alpha = 1 the z -> 0 limit (the
// sample mean) is included as a candidate.
double empirical_evar(const SampleSet& samples, double alpha,
                      const EvarSearch& search = {});

}  // namespace riskbound
