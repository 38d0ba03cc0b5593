#include "smlink/mc_sim.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "smlink/analytic_model.hpp"
#include "smlink/parallel.hpp"

namespace smlink {

namespace {

constexpr std::int64_t kChunk = 16384;  // samples per sub-seeded chunk

void validate(const LinkParams& p, const SimConfig& cfg) {
  smlink::validate(p);
  if (!(cfg.samples >= 1)) throw ValidationError("samples must be >= 1");
  if (cfg.window_radius != 0.0 && !(cfg.window_radius >= 10.0 * p.d))
    throw ValidationError("window_radius must be >= 10*d (or 0 for the default)");
}

double resolve_radius(const LinkParams& p, const SimConfig& cfg, double beta) {
  return cfg.window_radius != 0.0 ? cfg.window_radius : default_radius(p, beta);
}

// Mean interference from the field beyond the window (Campbell's theorem):
// lambda * int_{r>R} r^-alpha 2 pi r dr, unit-mean gains.
double mean_tail_interference(double lambda, double alpha, double radius) {
  return 2.0 * std::numbers::pi * lambda * std::pow(radius, 2.0 - alpha) /
         (alpha - 2.0);
}

// Success count over one chunk of realizations, streaming the same draw
// order as sample_field. Each realization adds the deterministic far-field
// mean to the windowed interference sum; the sum stops early once it already
// exceeds the success threshold, which cannot change the outcome because
// extra interferers only push it further up.
template <typename PowInvHalfAlpha>
std::int64_t run_chunk(const LinkParams& p, double beta, double radius,
                       std::int64_t n, std::uint64_t seed,
                       PowInvHalfAlpha u_pow_neg_half_alpha) {
  Rng rng(seed);
  const double mean_count = p.lambda_ * std::numbers::pi * radius * radius;
  const double signal_scale = p.w_s / p.w_p * std::pow(p.d, -p.alpha) / beta;
  const double mu_tail = mean_tail_interference(p.lambda_, p.alpha, radius);
  const double r_pow_alpha = std::pow(radius, p.alpha);

  std::int64_t successes = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t count = rng.poisson(mean_count);
    const double g0 = rng.exponential();
    // SIR > beta  <=>  sum g_i r_i^-alpha + mu_tail < g0 (w_s/w_p) d^-alpha / beta,
    // with r_i^-alpha = (R sqrt(u))^-alpha = R^-alpha u^(-alpha/2).
    const double threshold = (g0 * signal_scale - mu_tail) * r_pow_alpha;
    double interference = 0.0;
    std::int64_t drawn = 0;
    while (drawn < count && interference < threshold) {
      const double u = rng.uniform01();
      interference += rng.exponential() * u_pow_neg_half_alpha(u);
      ++drawn;
    }
    if (interference < threshold) ++successes;
  }
  return successes;
}

// u^(-alpha/2) per interferer dominates the run; the common exponents get
// multiply/sqrt forms instead of the generic pow.
std::int64_t run_chunk_dispatch(const LinkParams& p, double beta, double radius,
                                std::int64_t n, std::uint64_t seed) {
  const double e = 0.5 * p.alpha;
  if (e == 1.5)
    return run_chunk(p, beta, radius, n, seed,
                     [](double u) { return 1.0 / (u * std::sqrt(u)); });
  if (e == 2.0)
    return run_chunk(p, beta, radius, n, seed,
                     [](double u) { return 1.0 / (u * u); });
  if (e == 2.5)
    return run_chunk(p, beta, radius, n, seed,
                     [](double u) { return 1.0 / (u * u * std::sqrt(u)); });
  if (e == 3.0)
    return run_chunk(p, beta, radius, n, seed,
                     [](double u) { return 1.0 / (u * u * u); });
  const double neg = -e;
  return run_chunk(p, beta, radius, n, seed,
                   [neg](double u) { return std::pow(u, neg); });
}

}  // namespace

double default_radius(const LinkParams& p, double beta) {
  const double scale = std::pow(beta * p.w_p / p.w_s, 1.0 / p.alpha);
  return std::max(20.0 * p.d, 20.0 * p.d * scale);
}

FieldRealization sample_field(const LinkParams& p, const SimConfig& cfg, Rng& rng) {
  validate(p, cfg);
  const double radius = cfg.window_radius != 0.0 ? cfg.window_radius : 20.0 * p.d;
  const double mean_count = p.lambda_ * std::numbers::pi * radius * radius;

  FieldRealization f;
  const std::int64_t count = rng.poisson(mean_count);
  f.g0 = rng.exponential();
  f.distances.resize(count);
  f.gains.resize(count);
  for (std::int64_t i = 0; i < count; ++i) {
    f.distances[i] = radius * std::sqrt(rng.uniform01());
    f.gains[i] = rng.exponential();
  }
  return f;
}

double sir(const LinkParams& p, const FieldRealization& f) {
  validate(p);
  if (f.distances.size() == 0) return std::numeric_limits<double>::infinity();
  const double interference = (f.gains * f.distances.pow(-p.alpha)).sum();
  return p.w_s * f.g0 * std::pow(p.d, -p.alpha) / (p.w_p * interference);
}

EmpiricalPsuc empirical_psuc(const LinkParams& p, double beta, const SimConfig& cfg,
                             unsigned threads) {
  validate(p, cfg);
  if (!(beta > 0.0)) throw ValidationError("beta must be > 0");
  const double radius = resolve_radius(p, cfg, beta);

  const std::int64_t m = cfg.samples;
  const std::size_t n_chunks = static_cast<std::size_t>((m + kChunk - 1) / kChunk);
  std::vector<std::int64_t> successes(n_chunks, 0);
  for_each_chunk(n_chunks, threads, [&](std::size_t c) {
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t n = std::min<std::int64_t>(kChunk, m - begin);
    successes[c] = run_chunk_dispatch(p, beta, radius, n, sub_seed(cfg.seed, c));
  });

  std::int64_t total = 0;
  for (std::int64_t s : successes) total += s;

  EmpiricalPsuc out;
  out.estimate = static_cast<double>(total) / static_cast<double>(m);
  out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(m));
  out.samples = m;
  out.window_radius = radius;
  out.seed = cfg.seed;
  return out;
}

}  // namespace smlink
