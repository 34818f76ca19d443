#pragma once

#include <optional>
#include <random>
#include <vector>

namespace riskbound {

// Gaussian mixture with an optional upper truncation point. Truncation
// gives the distribution a finite essential upper bound, which the
// bounding routines require of their inputs.
struct GaussianMixture {
  struct Component {
    double weight = 1.0;
    double mean = 0.0;
    double sigma = 1.0;
  };
  std::vector<Component> components;
  std::optional<double> upper;

  void validate() const;
  double cdf(double x) const;
  // Inverse CDF by bisection; p in [0, 1].
  double quantile(double p) const;
  double sample(std::mt19937_64& rng) const;
};

// Three well-separated modes, truncated at 5. Used as the standard
// multimodal test distribution throughout the suite.
GaussianMixture multimodal_fixture();

}  // namespace riskbound
