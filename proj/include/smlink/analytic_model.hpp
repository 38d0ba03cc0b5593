#pragma once

#include "smlink/types.hpp"

namespace smlink {

// Fading/geometry constant kappa = Gamma(1 + 2/alpha) * Gamma(1 - 2/alpha),
// evaluated through the reflection identity Gamma(1+x)Gamma(1-x) = pi*x/sin(pi*x)
// with x = 2/alpha. Diverges as alpha -> 2+ (Gamma pole); throws for alpha <= 2.
double kappa(double alpha);

// P_suc = exp(-lambda * kappa * pi * d^2 * beta^{2/alpha} * (w_p/w_s)^{2/alpha});
// success probability of the reference link over a Poisson field with
// Rayleigh fading. Strictly decreasing in beta, lambda, d, w_p; increasing in w_s.
double success_probability(const LinkParams& p, double beta);

// Link throughput T = log2(1 + beta) * P_suc, in bits/s/Hz.
double throughput(const LinkParams& p, double beta);

}  // namespace smlink
