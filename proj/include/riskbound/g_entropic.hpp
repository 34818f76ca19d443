#pragma once

#include <functional>
#include <optional>
#include <string>

#include "riskbound/risk_core.hpp"

namespace riskbound {

// Scalar loss L(x, mu, t) = t*mu + t*g(x/t - mu + beta) built from the
// convex conjugate g of a divergence and the divergence level beta.
// CVaR and EVaR are the two packaged instances.
class LossSpec {
 public:
  using Conjugate = std::function<double(double)>;

  // g(y) = max(y, 0) / alpha, beta = 0.
  static LossSpec cvar(double alpha);
  // g(y) = exp(y - 1), beta = -log(alpha). Exponents above exp_cap
  // evaluate to +infinity, which the optimizer treats as infeasible.
  static LossSpec evar(double alpha, double exp_cap = 700.0);
  static LossSpec custom(Conjugate conjugate, double beta, std::string label,
                         bool nondecreasing_in_x = true);

  double loss(double x, double mu, double t) const;
  double beta() const noexcept { return beta_; }
  const std::string& label() const noexcept { return label_; }
  // True when L is nondecreasing in x, so max over samples reduces to
  // the sample max.
  bool nondecreasing_in_x() const noexcept { return nondecreasing_; }

 private:
  LossSpec(Conjugate g, double beta, std::string label, bool nondecreasing)
      : conjugate_(std::move(g)),
        beta_(beta),
        label_(std::move(label)),
        nondecreasing_(nondecreasing) {}
  Conjugate conjugate_;
  double beta_ = 0.0;
  std::string label_;
  bool nondecreasing_ = true;
};

double loss_cvar(double x, double mu, double t, double alpha);
double loss_evar(double x, double mu, double t, double alpha,
                 double exp_cap = 700.0);

// Search box and budget for the (mu, t) minimization. The coarse grid
// seeds a simplex refinement that is free to leave the box; optima that
// stay pinned to a box edge are flagged rather than rejected.
struct SearchConfig {
  double t_min = 1e-3;
  double t_max = 1e3;
  int t_points = 25;
  int mu_points = 25;
  double refine_tol = 1e-8;
  int max_evaluations = 2000;
  std::optional<double> mu_min;  // default: min sample - (ell - min sample)
  std::optional<double> mu_max;  // default: ell + (ell - min sample)
  void validate() const;
};

struct BoundResult {
  double bound = 0.0;      // minimized objective
  double arg_mu = 0.0;
  double arg_t = 0.0;
  int evaluations = 0;
  double confidence = 0.0;  // 1 - (1-eps)^N for the sample count used
  bool edge_warning = false;
};

// High-confidence upper bound on the g-entropic risk of the sampled
// variable: minimizes (1-eps) * max_k L(x_k, mu, t) + eps * L(ell, mu, t)
// over mu and t > 0. Samples must respect the essential bound ell.
BoundResult bound_g_entropic(const SampleSet& samples,
                             const EssentialBound& bound, const LossSpec& loss,
                             double epsilon, const SearchConfig& config = {});

BoundResult bound_cvar(const SampleSet& samples, const EssentialBound& bound,
                       double alpha, double epsilon,
                       const SearchConfig& config = {});
BoundResult bound_evar(const SampleSet& samples, const EssentialBound& bound,
                       double alpha, double epsilon,
                       const SearchConfig& config = {});

}  // namespace riskbound
