#include "smlink/optimizer.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "smlink/analytic_model.hpp"

namespace smlink {

namespace {

// k = 2 lambda kappa pi d^2 (w_p/w_s)^{2/alpha}, the constant of the
// stationarity equation alpha*beta = k beta^{2/alpha} (1+beta) ln(1+beta).
double stationarity_k(const LinkParams& p) {
  return 2.0 * p.lambda_ * kappa(p.alpha) * std::numbers::pi * p.d * p.d *
         std::pow(p.w_p / p.w_s, 2.0 / p.alpha);
}

double stationarity_residual(double alpha, double k, double beta) {
  return alpha * beta - k * std::pow(beta, 2.0 / alpha) * (1.0 + beta) * std::log1p(beta);
}

}  // namespace

std::string to_string(Branch b) {
  return b == Branch::OutageBinding ? "outage_binding" : "unconstrained_interior";
}

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Lambda: return "lambda";
    case SweepAxis::WMax: return "wmax";
    default: return "epsilon";
  }
}

UnconstrainedSolution unconstrained_beta(const LinkParams& p, const SolverOptions& opts) {
  validate(p);
  if (!(opts.tol > 0.0)) throw ValidationError("solver tol must be > 0");
  if (!(opts.bracket_hi > 0.0)) throw ValidationError("bracket_hi must be > 0");

  const double k = stationarity_k(p);
  auto g = [&](double beta) { return stationarity_residual(p.alpha, k, beta); };

  UnconstrainedSolution sol;

  // g > 0 on the low side of the root, < 0 on the high side. Start at 1e-6
  // and expand geometrically toward the side with the sign change.
  double lo = 1e-6;
  double hi = lo;
  if (g(lo) <= 0.0) {
    // Root below the start point (large k pushes it toward zero).
    while (lo > 1e-300 && g(lo) <= 0.0) lo *= 0.25;
    if (g(lo) <= 0.0) return sol;
    hi = lo * 4.0;
  } else {
    double prev = hi;
    while (hi < opts.bracket_hi && g(hi) > 0.0) {
      prev = hi;
      hi = std::min(hi * 4.0, opts.bracket_hi);
    }
    if (g(hi) > 0.0) return sol;  // no sign change below bracket_hi
    lo = prev;
  }

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    const double gm = g(mid);
    if (hi - lo <= opts.tol && std::abs(gm) <= opts.tol) break;
    if (gm > 0.0)
      lo = mid;
    else
      hi = mid;
    const double next = 0.5 * (lo + hi);
    if (next == mid) break;  // interval at floating resolution
    mid = next;
  }

  sol.beta_un = mid;
  sol.outage_at_beta_un = unconstrained_outage(p.alpha, mid);
  sol.converged = std::abs(g(mid)) <= opts.tol;
  return sol;
}

double unconstrained_outage(double alpha, double beta_un) {
  if (!(alpha > 2.0)) throw ValidationError("alpha must be > 2");
  if (!(beta_un > 0.0)) throw ValidationError("beta_un must be > 0");
  const double exponent =
      alpha * beta_un / (2.0 * (1.0 + beta_un) * std::log1p(beta_un));
  return 1.0 - std::exp(-exponent);
}

ConstrainedSolution constrained_optimum(const LinkParams& p_base, const Constraints& c,
                                        const SolverOptions& opts) {
  validate(c);
  LinkParams p = p_base;
  p.w_s = c.w_max;  // Lemma 1: throughput is increasing in w_s, so the cap is used
  validate(p);

  const UnconstrainedSolution un = unconstrained_beta(p, opts);
  if (!un.converged)
    throw NoRootError(
        "stationarity equation has no root in the bracket; the concavity "
        "assumption fails and the branch condition cannot be evaluated");

  ConstrainedSolution out;
  if (un.outage_at_beta_un > c.epsilon) {
    // Outage constraint binds: beta* sits where 1 - P_suc == epsilon.
    const double a = -std::log1p(-c.epsilon) /
                     (p.lambda_ * kappa(p.alpha) * std::numbers::pi * p.d * p.d);
    const double beta_star = c.w_max / p.w_p * std::pow(a, p.alpha / 2.0);
    out.branch = Branch::OutageBinding;
    out.point.beta = beta_star;
    out.point.w_s = c.w_max;
    out.point.p_suc = success_probability(p, beta_star);
    out.point.throughput = (1.0 - c.epsilon) * std::log2(1.0 + beta_star);
    out.t_approx = approx_throughput(p_base, c);
  } else {
    out.branch = Branch::UnconstrainedInterior;
    out.point.beta = un.beta_un;
    out.point.w_s = c.w_max;
    out.point.p_suc = success_probability(p, un.beta_un);
    out.point.throughput = throughput(p, un.beta_un);
    out.t_approx = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

double approx_throughput(const LinkParams& p_base, const Constraints& c) {
  validate(c);
  LinkParams p = p_base;
  p.w_s = c.w_max;
  validate(p);
  const double a = -std::log1p(-c.epsilon) /
                   (p.lambda_ * kappa(p.alpha) * std::numbers::pi * p.d * p.d);
  return (1.0 - c.epsilon) * c.w_max / (std::numbers::ln2 * p.w_p) *
         std::pow(a, p.alpha / 2.0);
}

std::vector<SweepPoint> sweep(const LinkParams& p_base, const Constraints& c_base,
                              SweepAxis axis, const ArrayXd& grid,
                              const SolverOptions& opts) {
  if (grid.size() == 0) throw ValidationError("sweep grid must be nonempty");
  std::vector<SweepPoint> points(static_cast<std::size_t>(grid.size()));
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    SweepPoint& pt = points[static_cast<std::size_t>(i)];
    pt.axis_value = grid[i];
    LinkParams p = p_base;
    Constraints c = c_base;
    switch (axis) {
      case SweepAxis::Lambda: p.lambda_ = grid[i]; break;
      case SweepAxis::WMax: c.w_max = grid[i]; break;
      case SweepAxis::Epsilon: c.epsilon = grid[i]; break;
    }
    try {
      pt.solution = constrained_optimum(p, c, opts);
      pt.ok = true;
    } catch (const Error& e) {
      pt.error = e.what();
    }
  }
  return points;
}

}  // namespace smlink
