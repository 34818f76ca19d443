#include "riskbound/g_entropic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "riskbound/errors.hpp"
#include "riskbound/nelder_mead.hpp"

namespace riskbound {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LossSpec LossSpec::cvar(double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, "LossSpec::cvar: alpha must lie in (0, 1]");
  return LossSpec([alpha](double y) { return std::max(y, 0.0) / alpha; }, 0.0,
                  "cvar", true);
}

LossSpec LossSpec::evar(double alpha, double exp_cap) {
  require(alpha > 0.0 && alpha <= 1.0, "LossSpec::evar: alpha must lie in (0, 1]");
  require(exp_cap > 0.0, "LossSpec::evar: exp_cap must be positive");
  return LossSpec(
      [exp_cap](double y) {
        if (y - 1.0 > exp_cap) return kInf;
        return std::exp(y - 1.0);
      },
      -std::log(alpha), "evar", true);
}

LossSpec LossSpec::custom(Conjugate conjugate, double beta, std::string label,
                          bool nondecreasing_in_x) {
  require(static_cast<bool>(conjugate), "LossSpec::custom: empty conjugate");
  return LossSpec(std::move(conjugate), beta, std::move(label),
                  nondecreasing_in_x);
}

double LossSpec::loss(double x, double mu, double t) const {
  require(t > 0.0, "LossSpec: t must be positive");
  const double g = conjugate_(x / t - mu + beta_);
  if (!std::isfinite(g)) return g > 0.0 ? kInf : -kInf;
  return t * mu + t * g;
}

double loss_cvar(double x, double mu, double t, double alpha) {
  return LossSpec::cvar(alpha).loss(x, mu, t);
}

double loss_evar(double x, double mu, double t, double alpha, double exp_cap) {
  return LossSpec::evar(alpha, exp_cap).loss(x, mu, t);
}

void SearchConfig::validate() const {
  require(t_min > 0.0 && t_min < t_max, "SearchConfig: need 0 < t_min < t_max");
  require(t_points >= 2 && mu_points >= 2,
          "SearchConfig: need at least 2 grid points per axis");
  require(refine_tol > 0.0, "SearchConfig: refine_tol must be positive");
  require(max_evaluations >= 10, "SearchConfig: evaluation budget too small");
  if (mu_min && mu_max)
    require(*mu_min <= *mu_max, "SearchConfig: mu_min exceeds mu_max");
}

BoundResult bound_g_entropic(const SampleSet& samples,
                             const EssentialBound& bound, const LossSpec& loss,
                             double epsilon, const SearchConfig& config) {
  bound.validate();
  config.validate();
  require(epsilon >= 0.0 && epsilon < 1.0,
          "bound_g_entropic: epsilon must lie in [0, 1)");
  const auto& xs = samples.values();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(xs[i] <= bound.ell, "essential bound violated by sample " +
                                    std::to_string(i + 1) + " (value " +
                                    std::to_string(xs[i]) + " > ell)");
  }

  const double ell = bound.ell;
  const double span = ell - samples.min();
  const double mu_lo = config.mu_min.value_or(samples.min() - span);
  const double mu_hi = config.mu_max.value_or(ell + span);

  // Worst sample term; a loss monotone in x only needs the max.
  auto worst = [&](double mu, double t) {
    if (loss.nondecreasing_in_x()) return loss.loss(samples.max(), mu, t);
    double w = -kInf;
    for (double x : xs) w = std::max(w, loss.loss(x, mu, t));
    return w;
  };
  auto objective = [&](double mu, double t) {
    const double zeta = worst(mu, t);
    if (epsilon == 0.0) return zeta;
    if (!std::isfinite(zeta)) return kInf;
    const double ub = loss.loss(ell, mu, t);
    if (!std::isfinite(ub)) return kInf;
    return (1.0 - epsilon) * zeta + epsilon * ub;
  };

  int evaluations = 0;
  // Coarse grid over the box, log-spaced in t.
  const double s_lo = std::log(config.t_min);
  const double s_hi = std::log(config.t_max);
  const double ds = (s_hi - s_lo) / (config.t_points - 1);
  const double dmu =
      mu_hi > mu_lo ? (mu_hi - mu_lo) / (config.mu_points - 1) : 0.0;

  struct Cell {
    double mu, s, value;
  };
  std::vector<Cell> best;
  for (int i = 0; i < config.t_points; ++i) {
    const double s = s_lo + ds * i;
    const double t = std::exp(s);
    for (int j = 0; j < config.mu_points; ++j) {
      const double mu = mu_lo + dmu * j;
      const double v = objective(mu, t);
      ++evaluations;
      if (!std::isfinite(v)) continue;
      best.push_back({mu, s, v});
      std::sort(best.begin(), best.end(),
                [](const Cell& a, const Cell& b) { return a.value < b.value; });
      if (best.size() > 3) best.pop_back();
    }
  }
  if (best.empty())
    throw SearchError("bound_g_entropic: no finite objective value in the search box");

  // Simplex refinement from the leading grid cells, in (mu, log t) so t
  // stays positive. The simplex may leave the box.
  BoundResult out;
  out.bound = best[0].value;
  out.arg_mu = best[0].mu;
  out.arg_t = std::exp(best[0].s);
  auto f = [&](const std::vector<double>& p) {
    const double t = std::exp(p[1]);
    if (t <= 0.0 || !std::isfinite(t)) return kInf;
    return objective(p[0], t);
  };
  const double step_mu = dmu > 0.0 ? dmu : 1e-3 * (1.0 + std::abs(best[0].mu));
  for (const Cell& c : best) {
    std::vector<std::vector<double>> simplex = {
        {c.mu, c.s}, {c.mu + step_mu, c.s}, {c.mu, c.s + ds}};
    NelderMeadResult r =
        nelder_mead(f, simplex, config.refine_tol, config.max_evaluations);
    evaluations += r.evaluations;
    if (r.value < out.bound) {
      out.bound = r.value;
      out.arg_mu = r.x[0];
      out.arg_t = std::exp(r.x[1]);
    }
  }

  // ell itself always bounds the measure: every sample sits at or below it
  // and the reweighted expectation cannot exceed the essential bound. The
  // infimum can sit on the t -> 0 edge (notably epsilon >= alpha, or a
  // degenerate max == ell), where the exponential loss only asymptotes and
  // the simplex stalls a little high; the cap closes that gap.
  out.bound = std::min(out.bound, ell);

  out.evaluations = evaluations;
  out.confidence =
      var_bound_confidence(static_cast<std::uint64_t>(samples.size()), epsilon);
  const double edge_slack = 1e-3;
  out.edge_warning =
      out.arg_t <= config.t_min * (1.0 + edge_slack) ||
      out.arg_t >= config.t_max * (1.0 - edge_slack) ||
      (dmu > 0.0 && (out.arg_mu <= mu_lo + edge_slack * dmu ||
                     out.arg_mu >= mu_hi - edge_slack * dmu));
  return out;
}

BoundResult bound_cvar(const SampleSet& samples, const EssentialBound& bound,
                       double alpha, double epsilon, const SearchConfig& config) {
  return bound_g_entropic(samples, bound, LossSpec::cvar(alpha), epsilon, config);
}

BoundResult bound_evar(const SampleSet& samples, const EssentialBound& bound,
                       double alpha, double epsilon, const SearchConfig& config) {
  return bound_g_entropic(samples, bound, LossSpec::evar(alpha), epsilon, config);
}

}  // namespace riskbound
