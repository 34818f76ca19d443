#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "riskbound/distributions.hpp"
#include "riskbound/rng.hpp"

using namespace riskbound;

TEST_CASE("mixture validation") {
  GaussianMixture bad;
  bad.components = {{0.5, 0.0, 1.0}};  // weights do not sum to one
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.components = {{1.0, 0.0, -1.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.components = {{1.0, 0.0, 1e-6}};
  bad.upper = -50.0;  // essentially no mass below the cutoff
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_NOTHROW(multimodal_fixture().validate());
}

TEST_CASE("cdf is monotone and normalized") {
  const GaussianMixture mix = multimodal_fixture();
  double prev = -1.0;
  for (double x = -4.0; x <= 5.0; x += 0.05) {
    const double c = mix.cdf(x);
    CHECK(c >= prev - 1e-15);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    prev = c;
  }
  CHECK(mix.cdf(*mix.upper) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mix.cdf(-100.0) == doctest::Approx(0.0));
}

TEST_CASE("quantile inverts the cdf") {
  const GaussianMixture mix = multimodal_fixture();
  for (double p : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.98, 0.999}) {
    const double q = mix.quantile(p);
    CHECK(mix.cdf(q) == doctest::Approx(p).epsilon(1e-9));
  }
  CHECK_THROWS_AS(mix.quantile(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(mix.quantile(1.1), std::invalid_argument);
}

TEST_CASE("samples respect truncation and match the cdf") {
  const GaussianMixture mix = multimodal_fixture();
  auto rng = make_rng(101);
  const int n = 20000;
  std::vector<double> draws(n);
  for (auto& d : draws) {
    d = mix.sample(rng);
    CHECK(d <= *mix.upper);
  }
  std::sort(draws.begin(), draws.end());
  // Empirical CDF within a DKW-style band at a handful of probes.
  for (double x : {-0.5, 0.0, 1.0, 2.0, 3.0, 4.0}) {
    const double emp =
        static_cast<double>(std::lower_bound(draws.begin(), draws.end(), x) -
                            draws.begin()) /
        n;
    CHECK(std::abs(emp - mix.cdf(x)) < 0.015);
  }
  // Sample quantile near the analytic one.
  const double q90 = draws[static_cast<std::size_t>(0.9 * n)];
  CHECK(std::abs(q90 - mix.quantile(0.9)) < 0.05);
}

TEST_CASE("untruncated mixture") {
  GaussianMixture g;
  g.components = {{1.0, 2.0, 0.5}};
  g.validate();
  CHECK(g.quantile(0.5) == doctest::Approx(2.0).epsilon(1e-9));
  // 97.72% of a Gaussian lies below mean + 2 sigma.
  CHECK(g.cdf(3.0) == doctest::Approx(0.9772498680518208).epsilon(1e-12));
}
