#include "smlink/analytic_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace smlink {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void validate(const LinkParams& p) {
  require(std::isfinite(p.alpha) && p.alpha > 2.0 && p.alpha <= 6.0,
          "alpha must be in (2, 6]; kappa has a Gamma pole at alpha = 2");
  require(positive(p.lambda_), "lambda must be finite and > 0");
  require(positive(p.d), "d must be finite and > 0");
  require(positive(p.w_p), "w_p must be finite and > 0");
  require(positive(p.w_s), "w_s must be finite and > 0");
}

void validate(const Constraints& c) {
  require(positive(c.w_max), "w_max must be finite and > 0");
  require(std::isfinite(c.epsilon) && c.epsilon > 0.0 && c.epsilon <= 0.25,
          "epsilon must be in (0, 0.25]");
}

double kappa(double alpha) {
  if (!(alpha > 2.0))
    throw ValidationError(
        "kappa requires alpha > 2; Gamma(1 - 2/alpha) has a pole at alpha = 2");
  const double x = 2.0 / alpha;  // in (0, 1)
  return std::numbers::pi * x / std::sin(std::numbers::pi * x);
}

double success_probability(const LinkParams& p, double beta) {
  validate(p);
  if (!(beta > 0.0)) throw ValidationError("beta must be > 0");
  const double two_over_alpha = 2.0 / p.alpha;
  const double exponent = p.lambda_ * kappa(p.alpha) * std::numbers::pi * p.d * p.d *
                          std::pow(beta, two_over_alpha) *
                          std::pow(p.w_p / p.w_s, two_over_alpha);
  return std::exp(-exponent);
}

double throughput(const LinkParams& p, double beta) {
  return std::log2(1.0 + beta) * success_probability(p, beta);
}

}  // namespace smlink
