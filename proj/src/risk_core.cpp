#include "riskbound/risk_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riskbound/errors.hpp"

namespace riskbound {

SampleSet::SampleSet(std::vector<double> values) : values_(std::move(values)) {
  require(!values_.empty(), "SampleSet: at least one sample required");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    require(std::isfinite(values_[i]),
            "SampleSet: sample " + std::to_string(i + 1) + " is not finite");
  }
  auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  min_ = *lo;
  max_ = *hi;
}

double SampleSet::mean() const {
  long double acc = 0.0L;
  for (double v : values_) acc += v;
  return static_cast<double>(acc / static_cast<long double>(values_.size()));
}

void ConfidenceSpec::validate() const {
  require(epsilon > 0.0 && epsilon < 1.0,
          "ConfidenceSpec: epsilon must lie in (0, 1)");
  require(gamma >= 0.0 && gamma < 1.0,
          "ConfidenceSpec: gamma must lie in [0, 1)");
}

void EssentialBound::validate() const {
  require(std::isfinite(ell), "EssentialBound: ell must be finite");
}

double scenario_max(const SampleSet& samples) { return samples.max(); }

double var_bound_confidence(std::uint64_t n, double epsilon) {
  require(n >= 1, "var_bound_confidence: n must be at least 1");
  require(epsilon >= 0.0 && epsilon <= 1.0,
          "var_bound_confidence: epsilon must lie in [0, 1]");
  if (epsilon == 1.0) return 1.0;
  // 1 - (1-eps)^n, kept accurate near both ends.
  return -std::expm1(static_cast<double>(n) * std::log1p(-epsilon));
}

std::uint64_t min_samples(const ConfidenceSpec& spec) {
  spec.validate();
  if (spec.gamma == 0.0) return 1;
  const double raw =
      std::log1p(-spec.gamma) / std::log1p(-spec.epsilon);  // both negative
  std::uint64_t n = raw <= 1.0 ? 1 : static_cast<std::uint64_t>(std::ceil(raw));
  // The closed form can land one off at representation boundaries; settle
  // it against the confidence function itself.
  while (n > 1 && var_bound_confidence(n - 1, spec.epsilon) >= spec.gamma) --n;
  while (var_bound_confidence(n, spec.epsilon) < spec.gamma) ++n;
  return n;
}

double scenario_confidence_general(std::uint64_t n, std::uint64_t d,
                                   double epsilon) {
  require(n >= 1, "scenario_confidence_general: n must be at least 1");
  require(d >= 1 && d <= n,
          "scenario_confidence_general: d must lie in [1, n]");
  require(epsilon >= 0.0 && epsilon <= 1.0,
          "scenario_confidence_general: epsilon must lie in [0, 1]");
  if (epsilon == 0.0) return 1.0;  // only the i = 0 term survives
  if (epsilon == 1.0) return 0.0;  // every term carries a (1-eps) factor
  const double log_eps = std::log(epsilon);
  const double log_1me = std::log1p(-epsilon);
  const double lg_n1 = std::lgamma(static_cast<double>(n) + 1.0);
  long double sum = 0.0L;
  for (std::uint64_t i = 0; i < d; ++i) {
    const double di = static_cast<double>(i);
    const double log_choose = lg_n1 - std::lgamma(di + 1.0) -
                              std::lgamma(static_cast<double>(n - i) + 1.0);
    sum += std::exp(log_choose + di * log_eps +
                    static_cast<double>(n - i) * log_1me);
  }
  return std::min(1.0, static_cast<double>(sum));
}

double expectation_bound(double zeta, const EssentialBound& bound,
                         double epsilon) {
  bound.validate();
  require(std::isfinite(zeta), "expectation_bound: zeta must be finite");
  require(zeta <= bound.ell,
          "expectation_bound: zeta exceeds the essential bound");
  require(epsilon >= 0.0 && epsilon <= 1.0,
          "expectation_bound: epsilon must lie in [0, 1]");
  return zeta * (1.0 - epsilon) + bound.ell * epsilon;
}

double empirical_var(const SampleSet& samples, double epsilon) {
  require(epsilon >= 0.0 && epsilon <= 1.0,
          "empirical_var: epsilon must lie in [0, 1]");
  std::vector<double> sorted = samples.values();
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double needed = (1.0 - epsilon) * n - 1e-9;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    // count of samples <= sorted[i]; duplicates resolve to the last slot.
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    if (static_cast<double>(i + 1) >= needed) return sorted[i];
  }
  return sorted.back();
}

double empirical_cvar(const SampleSet& samples, double alpha) {
  require(alpha > 0.0 && alpha <= 1.0,
          "empirical_cvar: alpha must lie in (0, 1]");
  std::vector<double> sorted = samples.values();
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  // suffix[k] = sum of sorted[k..n-1], accumulated in long double so the
  // alpha = 1 case reproduces the mean to full precision.
  std::vector<long double> suffix(n + 1, 0.0L);
  for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] + sorted[k];
  const long double an = static_cast<long double>(alpha) * n;
  long double best = sorted.back();  // z = max: objective equals max
  for (std::size_t k = 0; k < n; ++k) {
    const long double z = sorted[k];
    const long double excess = suffix[k] - z * static_cast<long double>(n - k);
    const long double value = z + excess / an;
    if (value < best) best = value;
  }
  return static_cast<double>(best);
}

void EvarSearch::validate() const {
  require(z_min > 0.0 && z_min < z_max, "EvarSearch: need 0 < z_min < z_max");
  require(grid_points >= 2, "EvarSearch: need at least 2 grid points");
  require(rel_tol > 0.0, "EvarSearch: rel_tol must be positive");
}

namespace {

// Chernoff objective at inverse temperature z, shifted by the sample max
// so the exponentials never overflow.
double evar_objective(const std::vector<double>& values, double max_value,
                      double alpha, double z) {
  long double acc = 0.0L;
  for (double v : values) acc += std::exp(z * (v - max_value));
  const double log_mean =
      static_cast<double>(std::log(acc / static_cast<long double>(values.size())));
  return max_value + (log_mean - std::log(alpha)) / z;
}

}  // namespace

double empirical_evar(const SampleSet& samples, double alpha,
                      const EvarSearch& search) {
  require(alpha > 0.0 && alpha <= 1.0,
          "empirical_evar: alpha must lie in (0, 1]");
  search.validate();
  const auto& values = samples.values();
  const double top = samples.max();
  auto objective = [&](double z) {
    return evar_objective(values, top, alpha, z);
  };

  const int m = search.grid_points;
  const double log_lo = std::log(search.z_min);
  const double log_hi = std::log(search.z_max);
  int best_idx = 0;
  double best_val = 0.0;
  std::vector<double> zs(m);
  for (int i = 0; i < m; ++i) {
    zs[i] = std::exp(log_lo + (log_hi - log_lo) * i / (m - 1));
    const double v = objective(zs[i]);
    if (i == 0 || v < best_val) {
      best_val = v;
      best_idx = i;
    }
  }

  // Golden section on log z around the best grid point. The objective is
  // unimodal in z: z^2 * d/dz has derivative z * K''(z) >= 0.
  double a = std::log(zs[std::max(0, best_idx - 1)]);
  double b = std::log(zs[std::min(m - 1, best_idx + 1)]);
  const double gr = 0.6180339887498949;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = objective(std::exp(x1));
  double f2 = objective(std::exp(x2));
  // b - a is log(z_hi / z_lo), so this is a relative tolerance on z.
  while (b - a > search.rel_tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = objective(std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = objective(std::exp(x2));
    }
  }
  best_val = std::min(best_val, std::min(f1, f2));
  if (alpha == 1.0) best_val = std::min(best_val, samples.mean());
  return best_val;
}

}  // namespace riskbound
