#pragma once

#include <functional>
#include <vector>

namespace riskbound {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Downhill simplex minimization with the standard coefficients
// (reflect 1, expand 2, contract 0.5, shrink 0.5). Terminates when the
// spread of simplex values falls below tol * (1 + |best|), or when the
// evaluation budget runs out. Infinite objective values are tolerated;
// the simplex contracts away from them.
NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<std::vector<double>> simplex, double tol, int max_evaluations);

}  // namespace riskbound
