#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "riskbound/distributions.hpp"
#include "riskbound/risk_core.hpp"
#include "riskbound/rng.hpp"

using namespace riskbound;

TEST_CASE("sample set validation") {
  CHECK_THROWS_AS(SampleSet({}), std::invalid_argument);
  CHECK_THROWS_AS(SampleSet({1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(SampleSet({std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
  SampleSet s({3.0, -1.0, 2.0});
  CHECK(s.min() == -1.0);
  CHECK(s.max() == 3.0);
  CHECK(s.mean() == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("scenario max") {
  CHECK(scenario_max(SampleSet({1.0, 5.0, 3.0})) == 5.0);
  CHECK(scenario_max(SampleSet({-2.0})) == -2.0);

  auto rng = make_rng(11);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 1 + uniform_below(rng, 10000);
    std::vector<double> values(n);
    for (auto& v : values) v = uniform_real(rng, -100.0, 100.0);
    SampleSet set(values);
    const double reported = scenario_max(set);
    CHECK(reported == *std::max_element(values.begin(), values.end()));
    CHECK(std::count(values.begin(), values.end(), reported) >= 1);
  }
}

TEST_CASE("var bound confidence") {
  CHECK(var_bound_confidence(20, 0.1) ==
        doctest::Approx(0.87842334540943071).epsilon(1e-15));
  CHECK(var_bound_confidence(1, 1.0) == 1.0);
  CHECK(var_bound_confidence(7, 0.0) == 0.0);
  CHECK(var_bound_confidence(149, 0.02) >= 0.95);
  CHECK(var_bound_confidence(148, 0.02) < 0.95);
  CHECK_THROWS_AS(var_bound_confidence(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(var_bound_confidence(10, 1.5), std::invalid_argument);
}

TEST_CASE("min samples reproduces the reference table") {
  CHECK(min_samples({0.02, 0.95}) == 149);
  CHECK(min_samples({0.01, 0.95}) == 299);
  CHECK(min_samples({0.05, 1.0 - 1e-6}) == 270);
  CHECK(min_samples({0.01, 0.99}) == 459);
  CHECK(min_samples({0.5, 0.0}) == 1);
}

TEST_CASE("min samples is minimal") {
  auto rng = make_rng(23);
  for (int round = 0; round < 1000; ++round) {
    const double gamma = uniform_real(rng, 0.0, 0.999999);
    const double epsilon = uniform_real(rng, 1e-4, 0.9);
    const std::uint64_t n = min_samples({epsilon, gamma});
    CHECK(var_bound_confidence(n, epsilon) >= gamma);
    if (n > 1) CHECK(var_bound_confidence(n - 1, epsilon) < gamma);
  }
  CHECK_THROWS_AS(min_samples({0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(min_samples({0.1, 1.0}), std::invalid_argument);
}

TEST_CASE("general scenario confidence") {
  // d = 1 must agree with the closed-form single-constraint case.
  for (std::uint64_t n : {1ULL, 5ULL, 20ULL, 149ULL}) {
    for (double eps : {0.01, 0.1, 0.3}) {
      CHECK(scenario_confidence_general(n, 1, eps) ==
            doctest::Approx(1.0 - var_bound_confidence(n, eps)).epsilon(1e-13));
    }
  }
  // Exact rational value: C(10,0)*0.7^10 + C(10,1)*0.3*0.7^9.
  CHECK(scenario_confidence_general(10, 2, 0.3) ==
        doctest::Approx(0.1493083459).epsilon(1e-12));
  CHECK(scenario_confidence_general(12, 12, 0.0) == 1.0);
  CHECK(scenario_confidence_general(12, 12, 1.0) == 0.0);
  // Nondecreasing in d.
  double prev = 0.0;
  for (std::uint64_t d = 1; d <= 15; ++d) {
    const double v = scenario_confidence_general(15, d, 0.2);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(scenario_confidence_general(5, 6, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(scenario_confidence_general(5, 0, 0.1), std::invalid_argument);
}

TEST_CASE("expectation bound") {
  CHECK(expectation_bound(2.0, {5.0}, 0.1) ==
        doctest::Approx(2.3).epsilon(1e-14));
  CHECK(expectation_bound(5.0, {5.0}, 0.3) == doctest::Approx(5.0));
  CHECK(expectation_bound(-0.1, {0.1}, 0.02) ==
        doctest::Approx(-0.096).epsilon(1e-12));
  CHECK_THROWS_AS(expectation_bound(6.0, {5.0}, 0.1), std::invalid_argument);

  auto rng = make_rng(31);
  for (int round = 0; round < 200; ++round) {
    const double ell = uniform_real(rng, -5.0, 5.0);
    const double zeta = ell - uniform_real(rng, 0.0, 3.0);
    double prev = -1e300;
    for (double eps : {0.0, 0.1, 0.4, 0.9, 1.0}) {
      const double b = expectation_bound(zeta, {ell}, eps);
      CHECK(b >= prev - 1e-12);  // nondecreasing in eps when zeta <= ell
      CHECK(b >= zeta - 1e-12);
      CHECK(b <= ell + 1e-12);
      prev = b;
    }
  }
}

TEST_CASE("empirical var") {
  const SampleSet ten({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(empirical_var(ten, 0.3) == 7.0);
  CHECK(empirical_var(ten, 0.0) == 10.0);
  CHECK(empirical_var(ten, 0.05) == 10.0);
  CHECK(empirical_var(ten, 1.0) == 1.0);
  CHECK(empirical_var(SampleSet({2.5, 2.5, 2.5}), 0.4) == 2.5);
  CHECK_THROWS_AS(empirical_var(ten, -0.1), std::invalid_argument);
}

TEST_CASE("empirical cvar") {
  const SampleSet ten({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(empirical_cvar(ten, 0.2) == doctest::Approx(9.5).epsilon(1e-14));
  CHECK(empirical_cvar(ten, 1.0) == doctest::Approx(5.5).epsilon(1e-14));
  CHECK(empirical_cvar(SampleSet({4.2}), 0.3) == doctest::Approx(4.2));
  CHECK(empirical_cvar(SampleSet({0.0, 10.0}), 0.5) ==
        doctest::Approx(10.0).epsilon(1e-14));
  CHECK_THROWS_AS(empirical_cvar(ten, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(empirical_cvar(ten, 1.5), std::invalid_argument);

  // alpha = 1 collapses to the mean.
  auto rng = make_rng(47);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 1 + uniform_below(rng, 1000);
    std::vector<double> values(n);
    for (auto& v : values) v = uniform_real(rng, -20.0, 20.0);
    SampleSet set(std::move(values));
    CHECK(empirical_cvar(set, 1.0) ==
          doctest::Approx(set.mean()).epsilon(1e-12));
  }
}

TEST_CASE("empirical evar") {
  // Point mass: the profile c - log(alpha)/z approaches c only as z
  // grows, and the search stops at its configured ceiling.
  for (double alpha : {1.0, 0.5, 0.1}) {
    const double v = empirical_evar(SampleSet({2.0}), alpha);
    CHECK(v >= 2.0 - 1e-12);
    CHECK(v <= 2.0 + 1e-3);
  }
  const SampleSet ten({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(empirical_evar(ten, 1.0) == doctest::Approx(5.5).epsilon(1e-12));

  const SampleSet two({0.0, 10.0});
  const double v = empirical_evar(two, 0.2);
  CHECK(v >= 10.0 - 1e-12);
  CHECK(v <= 10.0 + 1e-3);
  CHECK_THROWS_AS(empirical_evar(ten, 0.0), std::invalid_argument);

  // Independent dense-grid agreement.
  auto rng = make_rng(53);
  for (int round = 0; round < 20; ++round) {
    const std::size_t n = 2 + uniform_below(rng, 300);
    std::vector<double> values(n);
    for (auto& v2 : values) v2 = uniform_real(rng, -3.0, 7.0);
    SampleSet set(values);
    const double alpha = uniform_real(rng, 0.05, 1.0);
    const double mine = empirical_evar(set, alpha);
    const double ref = oracles::evar_grid_reference(values, alpha, 1e-4, 1e4, 3000);
    CHECK(mine <= ref + 1e-9);          // grid can only overshoot the search
    CHECK(oracles::rel_err(mine, ref) < 1e-5);
  }
}

TEST_CASE("risk measure ordering") {
  auto rng = make_rng(61);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 1 + uniform_below(rng, 300);
    std::vector<double> values(n);
    const double scale = std::exp(uniform_real(rng, -1.0, 2.0));
    for (auto& v : values) v = scale * uniform_real(rng, -4.0, 6.0);
    SampleSet set(std::move(values));
    for (double alpha : {0.05, 0.2, 0.5, 1.0}) {
      const double var = empirical_var(set, alpha);
      const double cvar = empirical_cvar(set, alpha);
      const double evar = empirical_evar(set, alpha);
      CHECK(var <= cvar + 1e-9);
      CHECK(cvar <= evar + 1e-9);
      // The z search stops at its ceiling, which leaves at most
      // -log(alpha)/z_max above the sample max.
      CHECK(evar <= set.max() - std::log(alpha) / EvarSearch{}.z_max + 1e-9);
    }
  }
}

TEST_CASE("sample max covers the quantile at the stated frequency") {
  const GaussianMixture mix = multimodal_fixture();
  const double epsilon = 0.1;
  const std::uint64_t n = 20;
  const double true_var = mix.quantile(1.0 - epsilon);
  const int trials = 2000;
  int hits = 0;
  auto rng = make_rng(67);
  for (int trial = 0; trial < trials; ++trial) {
    double top = -1e300;
    for (std::uint64_t k = 0; k < n; ++k) top = std::max(top, mix.sample(rng));
    if (top >= true_var) ++hits;
  }
  const double conf = var_bound_confidence(n, epsilon);
  const double freq = static_cast<double>(hits) / trials;
  // Continuous CDF makes the coverage probability exactly conf; allow a
  // 3-sigma band either way.
  const double sigma = std::sqrt(conf * (1.0 - conf) / trials);
  CHECK(freq >= conf - 3.0 * sigma);
  CHECK(freq <= conf + 3.0 * sigma);
}
