#include "riskbound/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riskbound/errors.hpp"

namespace riskbound {

namespace {

std::vector<double> blend(const std::vector<double>& a,
                          const std::vector<double>& b, double t) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

}  // namespace

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<std::vector<double>> simplex, double tol, int max_evaluations) {
  const std::size_t dim = simplex.empty() ? 0 : simplex[0].size();
  require(dim >= 1 && simplex.size() == dim + 1,
          "nelder_mead: simplex must have dim + 1 vertices");
  for (const auto& v : simplex)
    require(v.size() == dim, "nelder_mead: inconsistent vertex dimension");
  require(tol > 0.0, "nelder_mead: tol must be positive");
  require(max_evaluations >= static_cast<int>(dim) + 1,
          "nelder_mead: evaluation budget too small for initial simplex");

  NelderMeadResult res;
  std::vector<double> fv(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) {
    fv[i] = f(simplex[i]);
    ++res.evaluations;
  }

  auto order = [&] {
    std::vector<std::size_t> idx(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s2(dim + 1);
    std::vector<double> f2(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) {
      s2[i] = simplex[idx[i]];
      f2[i] = fv[idx[i]];
    }
    simplex.swap(s2);
    fv.swap(f2);
  };

  order();
  while (res.evaluations < max_evaluations) {
    const double spread = fv[dim] - fv[0];
    if (std::isfinite(fv[0]) && spread <= tol * (1.0 + std::abs(fv[0]))) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        centroid[j] += simplex[i][j] / static_cast<double>(dim);

    const std::vector<double> refl = blend(centroid, simplex[dim], -1.0);
    const double f_refl = f(refl);
    ++res.evaluations;

    if (f_refl < fv[0]) {
      const std::vector<double> expd = blend(centroid, simplex[dim], -2.0);
      const double f_expd = f(expd);
      ++res.evaluations;
      if (f_expd < f_refl) {
        simplex[dim] = expd;
        fv[dim] = f_expd;
      } else {
        simplex[dim] = refl;
        fv[dim] = f_refl;
      }
    } else if (f_refl < fv[dim - 1]) {
      simplex[dim] = refl;
      fv[dim] = f_refl;
    } else {
      // Contract toward the better of worst/reflected.
      const bool outside = f_refl < fv[dim];
      const std::vector<double> contr =
          outside ? blend(centroid, refl, 0.5) : blend(centroid, simplex[dim], 0.5);
      const double f_contr = f(contr);
      ++res.evaluations;
      if (f_contr < std::min(f_refl, fv[dim])) {
        simplex[dim] = contr;
        fv[dim] = f_contr;
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          simplex[i] = blend(simplex[0], simplex[i], 0.5);
          fv[i] = f(simplex[i]);
          ++res.evaluations;
          if (res.evaluations >= max_evaluations) break;
        }
      }
    }
    order();
  }

  res.x = simplex[0];
  res.value = fv[0];
  return res;
}

}  // namespace riskbound
