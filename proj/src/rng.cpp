#include "smlink/rng.hpp"

#include <cmath>

namespace smlink {

double Rng::exponential() {
  // uniform01 is in [0, 1), so the argument of log1p stays in (-1, 0].
  return -std::log1p(-uniform01());
}

std::int64_t Rng::poisson(double mu) {
  return mu < 10.0 ? poisson_knuth(mu) : poisson_ptrd(mu);
}

std::int64_t Rng::poisson_knuth(double mu) {
  const double limit = std::exp(-mu);
  std::int64_t k = 0;
  double prod = uniform01();
  while (prod > limit) {
    ++k;
    prod *= uniform01();
  }
  return k;
}

// Hormann's transformed rejection with decomposition (PTRD), valid for mu >= 10.
// "The transformed rejection method for generating Poisson random variables",
// Insurance: Mathematics and Economics 12 (1993) 39-45.
std::int64_t Rng::poisson_ptrd(double mu) {
  const double s = std::sqrt(mu);
  const double b = 0.931 + 2.53 * s;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mu = std::log(mu);

  for (;;) {
    double u = uniform01() - 0.5;
    double v = uniform01();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const double k = kf;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = k * log_mu - mu - std::lgamma(k + 1.0);
    if (lhs <= rhs) return static_cast<std::int64_t>(kf);
  }
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over seed + (index+1) * golden ratio increment
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace smlink
