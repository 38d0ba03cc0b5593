#pragma once

#include <cstdint>
#include <random>

namespace smlink {

// Deterministic stream for the Monte Carlo modules. The generator is
// std::mt19937_64 (bit-exact by the standard) and every distribution is
// implemented here, so a seed defines one stable stream on any platform:
//   uniform01: (x >> 11) * 2^-53, one engine call per variate
//   exponential(1): -log1p(-uniform01())
//   poisson(mu): Knuth product method for mu < 10, Hormann's PTRD otherwise
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double exponential();           // unit mean
  std::int64_t poisson(double mu);

 private:
  std::int64_t poisson_knuth(double mu);
  std::int64_t poisson_ptrd(double mu);

  std::mt19937_64 engine_;
};

// Sub-seed for worker chunk `index` of a run seeded with `seed`; a splitmix64
// mix so that chunk streams are decorrelated but a pure function of (seed, index).
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace smlink
