#include "riskbound/rng.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

#include "riskbound/errors.hpp"

namespace riskbound {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) {
  return mix64(mix64(master ^ mix64(stream)) ^ index);
}

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  require(n > 0, "uniform_below: n must be positive");
  if (n == 1) return 0;
  // Largest multiple of n that fits; draws past it would bias the result.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    std::uint64_t v = rng();
    if (v < limit) return v % n;
  }
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  require(lo < hi, "uniform_real: empty interval");
  const double u = (rng() >> 11) * 0x1.0p-53;  // [0, 1)
  return lo + u * (hi - lo);
}

double standard_normal(std::mt19937_64& rng) {
  // u1 in (0, 1]: avoids log(0).
  const double u1 = ((rng() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = (rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

double truncated_gaussian(std::mt19937_64& rng, double sigma, double cut) {
  require(sigma >= 0.0, "truncated_gaussian: sigma must be nonnegative");
  require(cut > 0.0, "truncated_gaussian: cut must be positive");
  if (sigma == 0.0) return 0.0;
  for (int i = 0; i < 1000; ++i) {
    double v = sigma * standard_normal(rng);
    if (std::abs(v) <= cut * sigma) return v;
  }
  throw SearchError("truncated_gaussian: rejection cap reached");
}

void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  if (workers == 0) workers = default_workers();
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

unsigned default_workers() {
  if (const char* env = std::getenv("RISKBOUND_WORKERS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace riskbound
