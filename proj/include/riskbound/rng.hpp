#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace riskbound {

// splitmix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// Deterministic sub-seed for a (master, stream, index) triple. Streams
// with distinct tags never collide in practice; the derivation is pure,
// so any unit of work can be replayed in isolation.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index = 0);

std::mt19937_64 make_rng(std::uint64_t seed);

// Uniform draw from {0, ..., n-1} by rejection, so the result does not
// depend on platform-specific std::uniform_int_distribution internals.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

// Uniform draw from [lo, hi).
double uniform_real(std::mt19937_64& rng, double lo, double hi);

// Standard normal via Box-Muller on explicit uniform draws. Avoids
// std::normal_distribution, whose draw count per variate is unspecified.
double standard_normal(std::mt19937_64& rng);

// Zero-mean Gaussian conditioned on |x| <= cut * sigma, by rejection.
double truncated_gaussian(std::mt19937_64& rng, double sigma, double cut);

// Runs fn(i) for i in [0, n). With more than one worker the iterations
// are distributed over threads; fn must write only to per-index slots so
// the schedule is unobservable and results stay deterministic.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& fn);

// Worker count: RISKBOUND_WORKERS if set, else hardware concurrency.
unsigned default_workers();

}  // namespace riskbound
