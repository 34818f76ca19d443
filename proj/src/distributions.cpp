#include "riskbound/distributions.hpp"

#include <cmath>

#include "riskbound/errors.hpp"
#include "riskbound/rng.hpp"

namespace riskbound {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

}  // namespace

void GaussianMixture::validate() const {
  require(!components.empty(), "GaussianMixture: no components");
  double total = 0.0;
  for (const auto& c : components) {
    require(c.weight > 0.0, "GaussianMixture: weights must be positive");
    require(c.sigma > 0.0, "GaussianMixture: sigmas must be positive");
    require(std::isfinite(c.mean), "GaussianMixture: means must be finite");
    total += c.weight;
  }
  require(std::abs(total - 1.0) < 1e-9, "GaussianMixture: weights must sum to 1");
  if (upper) {
    require(std::isfinite(*upper), "GaussianMixture: upper must be finite");
    double mass = 0.0;
    for (const auto& c : components)
      mass += c.weight * normal_cdf((*upper - c.mean) / c.sigma);
    require(mass > 1e-12, "GaussianMixture: no mass below the truncation point");
  }
}

double GaussianMixture::cdf(double x) const {
  double raw = 0.0;
  for (const auto& c : components)
    raw += c.weight * normal_cdf((x - c.mean) / c.sigma);
  if (!upper) return raw;
  if (x >= *upper) return 1.0;
  double z = 0.0;
  for (const auto& c : components)
    z += c.weight * normal_cdf((*upper - c.mean) / c.sigma);
  return raw / z;
}

double GaussianMixture::quantile(double p) const {
  require(p >= 0.0 && p <= 1.0, "GaussianMixture: p must lie in [0, 1]");
  double lo = components[0].mean, hi = components[0].mean, span = 0.0;
  for (const auto& c : components) {
    lo = std::min(lo, c.mean);
    hi = std::max(hi, c.mean);
    span = std::max(span, c.sigma);
  }
  lo -= 12.0 * span;
  hi = upper ? *upper : hi + 12.0 * span;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double GaussianMixture::sample(std::mt19937_64& rng) const {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    double u = uniform_real(rng, 0.0, 1.0);
    std::size_t k = 0;
    for (; k + 1 < components.size(); ++k) {
      if (u < components[k].weight) break;
      u -= components[k].weight;
    }
    const double v =
        components[k].mean + components[k].sigma * standard_normal(rng);
    if (!upper || v <= *upper) return v;
  }
  throw SearchError("GaussianMixture: rejection cap reached while sampling");
}

GaussianMixture multimodal_fixture() {
  GaussianMixture mix;
  mix.components = {{0.45, 0.0, 0.5}, {0.30, 2.0, 0.3}, {0.25, 3.5, 0.4}};
  mix.upper = 5.0;
  return mix;
}

}  // namespace riskbound
