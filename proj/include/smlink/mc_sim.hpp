#pragma once

#include <cstdint>

#include "smlink/rng.hpp"
#include "smlink/types.hpp"

namespace smlink {

// One draw of the interferer field around the aggregator: distances and
// Rayleigh (exponential power) gains of the interferers inside the truncation
// disk, plus the desired-link gain. Angles never enter the SIR and are not kept.
struct FieldRealization {
  ArrayXd distances;  // r_i > 0, m
  ArrayXd gains;      // g_i >= 0, unit-mean exponential
  double g0 = 0.0;    // desired-link gain
};

struct SimConfig {
  double window_radius = 0.0;  // truncation radius R, m; 0 = default_radius()
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
};

// R = max(20 d, 20 d (beta w_p/w_s)^{1/alpha}). The window only has to cover
// the region where single interferers matter; the field beyond it enters
// empirical_psuc through its exact mean (see below), which keeps the residual
// truncation error orders of magnitude under the Monte Carlo noise even for
// alpha near 2. Checked empirically by the radius-doubling test.
double default_radius(const LinkParams& p, double beta);

// Draw one field: count ~ Poisson(lambda pi R^2), positions uniform on the
// disk (r = R sqrt(u)), gains and g0 unit-mean exponential. Stream order per
// realization: count, g0, then (distance, gain) per interferer. A zero
// window_radius means 40*d here (no beta in scope to widen it).
FieldRealization sample_field(const LinkParams& p, const SimConfig& cfg, Rng& rng);

// Eq. (1): w_s g0 d^-alpha / (w_p sum_i g_i r_i^-alpha). An empty field has no
// interference and returns +infinity, which counts as success for any finite beta.
double sir(const LinkParams& p, const FieldRealization& f);

struct EmpiricalPsuc {
  double estimate = 0.0;  // fraction of realizations with SIR > beta
  double stderr_ = 0.0;   // binomial standard error sqrt(p(1-p)/M)
  std::int64_t samples = 0;
  double window_radius = 0.0;
  std::uint64_t seed = 0;
};

// Monte Carlo estimate of P_suc: the fraction of field realizations whose
// SIR exceeds beta, where each realization's interference is the windowed sum
// plus the deterministic mean of the field beyond the window,
// 2 pi lambda R^{2-alpha} / (alpha - 2). Dropping the tail entirely would
// bias the estimate high by several sigma at 1e5 samples for alpha near 2;
// adding its mean leaves only the tail's (tiny) fluctuation unaccounted for.
// Samples are split into fixed-size chunks, chunk i seeded with
// sub_seed(cfg.seed, i), so the estimate is identical for any thread count;
// threads = 0 means default_threads().
EmpiricalPsuc empirical_psuc(const LinkParams& p, double beta, const SimConfig& cfg,
                             unsigned threads = 0);

}  // namespace smlink
