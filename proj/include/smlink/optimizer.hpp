#pragma once

#include <string>
#include <vector>

#include "smlink/types.hpp"

namespace smlink {

// Root of alpha*beta = k * beta^{2/alpha} * (1+beta) * ln(1+beta), the
// stationarity condition of the unconstrained throughput in beta.
struct UnconstrainedSolution {
  double beta_un = 0.0;
  double outage_at_beta_un = 0.0;  // 1 - exp(-alpha*b / (2(1+b)ln(1+b))) at beta_un
  bool converged = false;
};

enum class Branch {
  OutageBinding,          // outage constraint active: closed-form optimum
  UnconstrainedInterior,  // constraint slack: beta* = beta_un at w_max
};

std::string to_string(Branch b);

struct ConstrainedSolution {
  OperatingPoint point;
  Branch branch = Branch::OutageBinding;
  double t_approx = 0.0;  // small-beta approximation of T*
};

struct SolverOptions {
  double tol = 1e-10;        // absolute tolerance on beta and on the residual
  double bracket_hi = 1e6;   // upper limit of the bracket search
};

// Solve the transcendental optimality equation by geometric bracket expansion
// from beta = 1e-6 followed by bisection. converged stays false when no sign
// change exists below opts.bracket_hi (the concave-region assumption fails).
UnconstrainedSolution unconstrained_beta(const LinkParams& p,
                                         const SolverOptions& opts = {});

// Outage probability at the unconstrained optimum,
// 1 - exp(-alpha*beta_un / (2 (1+beta_un) ln(1+beta_un))).
// Strictly decreasing in beta_un; independent of the powers and density.
double unconstrained_outage(double alpha, double beta_un);

// Solve max T s.t. w_s <= w_max, 1 - P_suc <= epsilon. p_base.w_s is ignored.
// When the outage constraint binds (outage at beta_un(w_max) > epsilon):
//   w_s* = w_max,  beta* = (w_max/w_p) * (-ln(1-eps) / (lambda kappa pi d^2))^{alpha/2},
//   T* = (1-eps) * log2(1+beta*).
// Otherwise the interior optimum (beta_un at w_max, w_s* = w_max) applies.
// Throws NoRootError if beta_un cannot be bracketed.
ConstrainedSolution constrained_optimum(const LinkParams& p_base,
                                        const Constraints& c,
                                        const SolverOptions& opts = {});

// Small-beta* closed form:
// (1-eps) * w_max / (ln 2 * w_p) * (-ln(1-eps) / (lambda kappa pi d^2))^{alpha/2}.
double approx_throughput(const LinkParams& p_base, const Constraints& c);

enum class SweepAxis { Lambda, WMax, Epsilon };

std::string to_string(SweepAxis a);

struct SweepPoint {
  double axis_value = 0.0;
  ConstrainedSolution solution;
  bool ok = false;
  std::string error;  // set when ok == false; the sweep continues past it
};

// Evaluate constrained_optimum along one axis; results in grid order.
std::vector<SweepPoint> sweep(const LinkParams& p_base, const Constraints& c_base,
                              SweepAxis axis, const ArrayXd& grid,
                              const SolverOptions& opts = {});

}  // namespace smlink
