// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Criterion 9 shells out to the CLI binary (path via SMLINK_CLI_PATH).

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smlink/analytic_model.hpp"
#include "smlink/mc_sim.hpp"
#include "smlink/optimizer.hpp"
#include "smlink/reconstruction.hpp"

using namespace smlink;

namespace {

namespace fs = std::filesystem;

int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(int number, std::string title)
      : number_(number), title_(std::move(title)),
        start_(std::chrono::steady_clock::now()) {}

  void require(bool ok, const std::string& detail) {
    if (!ok && why_.empty()) why_ = detail;
    ok_ = ok_ && ok;
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

  void finish(double budget_s) {
    const double t = elapsed();
    if (t >= budget_s) {
      ok_ = false;
      if (why_.empty()) why_ = "runtime budget exceeded";
    }
    std::printf("%s  criterion %d: %s (%.2f s)%s%s\n", ok_ ? "PASS" : "FAIL",
                number_, title_.c_str(), t, why_.empty() ? "" : " -- ",
                why_.c_str());
    std::fflush(stdout);
    if (!ok_) ++g_failures;
  }

 private:
  int number_;
  std::string title_;
  std::string why_;
  bool ok_ = true;
  std::chrono::steady_clock::time_point start_;
};

std::string fmtnum(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const LinkParams kRefParams{0.25, 4.0, 1.0, 1.0, 1.0};
const Constraints kRemark2{0.5, 0.05};

// -- criterion 1: unconstrained optimum of the reference configuration -------
void criterion1() {
  Criterion c(1, "unconstrained optimum: beta_un = 1.24 +- 0.01, outage 0.75 +- 0.005");
  const UnconstrainedSolution sol = unconstrained_beta(kRefParams);
  c.require(sol.converged, "solver did not converge");
  c.require(std::abs(sol.beta_un - 1.24) <= 0.01,
            "beta_un = " + fmtnum(sol.beta_un));
  const double outage = unconstrained_outage(4.0, sol.beta_un);
  c.require(std::abs(outage - 0.75) <= 0.005, "outage = " + fmtnum(outage));
  c.finish(1.0);
}

// -- criterion 2: Remark 2 closed form ---------------------------------------
void criterion2() {
  Criterion c(2, "closed-form optimum: beta* = 8.6e-4 +- 2e-5, approximation within 0.1%");
  const ConstrainedSolution sol = constrained_optimum(kRefParams, kRemark2);
  c.require(sol.branch == Branch::OutageBinding, "expected the outage-binding branch");
  c.require(std::abs(sol.point.beta - 8.6e-4) <= 2e-5,
            "beta* = " + fmtnum(sol.point.beta));
  const double rel =
      std::abs(sol.t_approx - sol.point.throughput) / sol.point.throughput;
  c.require(rel < 1e-3, "approximation gap = " + fmtnum(rel));
  c.finish(1.0);
}

// -- criterion 3: Monte Carlo agreement over the 27-cell grid ----------------
void criterion3() {
  Criterion c(3, "Monte Carlo vs closed form: >= 26 of 27 cells within 3 sigma");
  int pass = 0, cells = 0;
  for (double lambda : {0.05, 0.25, 1.0})
    for (double alpha : {3.0, 4.0, 6.0})
      for (double beta : {0.1, 1.0, 10.0}) {
        const LinkParams p{lambda, alpha, 1.0, 1.0, 1.0};
        SimConfig cfg;
        cfg.samples = 100000;
        cfg.seed = 1000 + static_cast<std::uint64_t>(cells);
        const EmpiricalPsuc est = empirical_psuc(p, beta, cfg);
        const double analytic = success_probability(p, beta);
        const double sigma = std::sqrt(analytic * (1.0 - analytic) /
                                       static_cast<double>(cfg.samples));
        if (std::abs(est.estimate - analytic) < 3.0 * sigma) ++pass;
        ++cells;
      }
  c.require(pass >= 26, "only " + std::to_string(pass) + "/27 cells within 3 sigma");
  c.finish(120.0);
}

// -- criterion 4: root finder vs brute-force grid argmax ---------------------
void criterion4() {
  Criterion c(4, "stationarity root matches a 1e5-point grid argmax, 20 random sets");
  std::mt19937_64 gen(20240401);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 100000;
  const double llo = std::log(1e-6), lhi = std::log(1e3);
  const double step = (lhi - llo) / (n - 1);
  for (int trial = 0; trial < 20; ++trial) {
    LinkParams p;
    p.lambda_ = 0.05 + 0.45 * u(gen);
    p.alpha = 2.5 + 3.5 * u(gen);
    p.d = 0.5 + 1.5 * u(gen);
    p.w_p = 0.5 + 1.5 * u(gen);
    p.w_s = 0.25 + 1.75 * u(gen);
    const UnconstrainedSolution sol = unconstrained_beta(p);
    c.require(sol.converged, "solver did not converge");
    double best_beta = 0.0, best_t = -1.0;
    for (int i = 0; i < n; ++i) {
      const double beta = std::exp(llo + step * i);
      const double t = throughput(p, beta);
      if (t > best_t) {
        best_t = t;
        best_beta = beta;
      }
    }
    const bool within = sol.beta_un >= best_beta * std::exp(-step) &&
                        sol.beta_un <= best_beta * std::exp(step);
    c.require(within, "root " + fmtnum(sol.beta_un) + " vs grid argmax " +
                          fmtnum(best_beta));
  }
  c.finish(30.0);
}

// -- criterion 5: figure shapes ----------------------------------------------
void criterion5() {
  Criterion c(5, "sweep shapes: T* decreasing in lambda, linear in w_max, increasing in epsilon");

  for (const Constraints& cons :
       {Constraints{0.5, 0.05}, Constraints{1.0, 0.1}}) {
    ArrayXd lambdas(50);
    for (int i = 0; i < 50; ++i)
      lambdas[i] = std::pow(10.0, -2.0 + 2.0 * i / 49.0);  // 0.01 .. 1
    const auto pts = sweep(kRefParams, cons, SweepAxis::Lambda, lambdas);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      c.require(pts[i].ok && pts[i - 1].ok, "lambda sweep point failed");
      c.require(pts[i].solution.point.throughput <
                    pts[i - 1].solution.point.throughput,
                "throughput not strictly decreasing in lambda");
    }
  }

  const ArrayXd wgrid = ArrayXd::LinSpaced(25, 0.05, 1.0);
  const auto wpts = sweep(kRefParams, kRemark2, SweepAxis::WMax, wgrid);
  for (std::size_t i = 1; i < wpts.size(); ++i)
    c.require(wpts[i].solution.point.throughput >
                  wpts[i - 1].solution.point.throughput,
              "throughput not increasing in w_max");
  const ConstrainedSolution t_w = constrained_optimum(kRefParams, kRemark2);
  Constraints doubled = kRemark2;
  doubled.w_max *= 2.0;
  const ConstrainedSolution t_2w = constrained_optimum(kRefParams, doubled);
  const double ratio = t_2w.point.throughput / t_w.point.throughput;
  c.require(ratio >= 1.99 && ratio <= 2.01,
            "T*(2W)/T*(W) = " + fmtnum(ratio));

  const ArrayXd egrid = ArrayXd::LinSpaced(25, 0.01, 0.25);
  const auto epts = sweep(kRefParams, kRemark2, SweepAxis::Epsilon, egrid);
  for (std::size_t i = 1; i < epts.size(); ++i)
    c.require(epts[i].solution.point.throughput >
                  epts[i - 1].solution.point.throughput,
              "throughput not strictly increasing in epsilon");
  c.finish(30.0);
}

// -- criterion 6: reconstruction exactness -----------------------------------
void criterion6() {
  Criterion c(6, "single-gap midpoint bit-for-bit; constant series give RMSD 0");
  std::mt19937_64 gen(606);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(u(gen) * 60);
    DemandSeries s;
    s.samples.resize(n);
    for (int i = 0; i < n; ++i) s.samples[i] = 5000.0 * u(gen);
    const int k = 1 + static_cast<int>(u(gen) * (n - 2));  // interior index
    ErasurePattern e;
    e.received = ArrayXb::Constant(n, true);
    e.received[k] = false;
    const ReconstructionReport rep = reconstruct(s, e);
    c.require(rep.reconstructed[k] == (s.samples[k - 1] + s.samples[k + 1]) / 2.0,
              "midpoint formula not bit-exact at index " + std::to_string(k));
  }

  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(u(gen) * 50);
    DemandSeries s;
    s.samples = ArrayXd::Constant(n, 777.25);
    ErasurePattern e;
    e.received.resize(n);
    int got = 0;
    for (int i = 0; i < n; ++i) {
      e.received[i] = u(gen) < 0.5;
      got += e.received[i] ? 1 : 0;
    }
    if (got == 0) e.received[n / 2] = true;
    c.require(reconstruct(s, e).rmsd == 0.0, "constant series RMSD not zero");
  }
  c.finish(30.0);
}

// -- criterion 7: Monte Carlo vs exhaustive erasure expectation --------------
void criterion7() {
  Criterion c(7, "toy-series Monte Carlo mean RMSD within 3 sigma of the 2^12 enumeration");
  DemandSeries toy;
  toy.samples.resize(12);
  toy.samples << 200, 210, 190, 3000, 3200, 250, 220, 1200, 230, 210, 2500, 240;
  toy.tau = 0.25;
  toy.label = "toy12";
  for (double eps : {0.05, 0.15, 0.25}) {
    const RmsdStats st = rmsd_statistics(toy, eps, 100000,
                                         7000 + static_cast<std::uint64_t>(eps * 100));
    const double exact = exact_mean_rmsd(toy, eps);
    c.require(std::abs(st.mean_rmsd - exact) < 3.0 * st.stderr_,
              "eps=" + fmtnum(eps) + ": mc " + fmtnum(st.mean_rmsd) + " vs exact " +
                  fmtnum(exact) + " (3se=" + fmtnum(3.0 * st.stderr_) + ")");
  }
  c.finish(30.0);
}

// -- criterion 8: fixture monotonicity and pinned regression value -----------
void criterion8() {
  Criterion c(8, "fixture mean RMSD monotone in epsilon; eps=0.25 regression value");
  const DemandSeries s = load_series(fs::path(SMLINK_DATA_DIR) / "bursty_household.csv");
  ArrayXd grid(6);
  grid << 0.01, 0.05, 0.10, 0.15, 0.20, 0.25;
  const auto pts = rmsd_sweep(s, grid, 100000, 8675309);
  for (std::size_t i = 1; i < pts.size(); ++i)
    c.require(pts[i].mean_rmsd >=
                  pts[i - 1].mean_rmsd - (pts[i].stderr_ + pts[i - 1].stderr_),
              "mean RMSD not monotone between grid points " + std::to_string(i - 1) +
                  " and " + std::to_string(i));
  // regression value computed once on this fixture with this seed; the paper's
  // REDD-derived 227 W needs the exact house selection and is not reproducible
  // from the bundled data
  const double pinned = 189.06153104216625;
  c.require(std::abs(pts[5].mean_rmsd - pinned) <= 1e-6 * pinned,
            "eps=0.25 mean RMSD " + fmtnum(pts[5].mean_rmsd) + " vs pinned " +
                fmtnum(pinned));
  c.finish(120.0);
}

// -- criterion 9: CLI byte determinism ---------------------------------------

int run_cmd(const std::string& cmd) { return std::system(cmd.c_str()); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion9(const std::string& cli) {
  Criterion c(9, "Monte Carlo commands rerun with the same seed are byte-identical");
  const fs::path dir = fs::temp_directory_path() / "smlink_acceptance";
  fs::create_directories(dir);
  const std::string fixture =
      (fs::path(SMLINK_DATA_DIR) / "bursty_household.csv").string();

  const fs::path sim1 = dir / "sim1.json", sim2 = dir / "sim2.json";
  const std::string sim_flags = " simulate --samples 30000 --seed 99 --output ";
  c.require(run_cmd(cli + sim_flags + sim1.string()) == 0, "simulate run 1 failed");
  c.require(run_cmd(cli + sim_flags + sim2.string()) == 0, "simulate run 2 failed");
  c.require(!slurp(sim1).empty() && slurp(sim1) == slurp(sim2),
            "simulate outputs differ");

  const fs::path rec1 = dir / "rec1.csv", rec2 = dir / "rec2.csv";
  const std::string rec_flags = " reconstruct --input " + fixture +
                                " --sweep 0.05 0.25 3 --realizations 20000"
                                " --seed 41 --output ";
  c.require(run_cmd(cli + rec_flags + rec1.string()) == 0, "reconstruct run 1 failed");
  c.require(run_cmd(cli + rec_flags + rec2.string()) == 0, "reconstruct run 2 failed");
  c.require(!slurp(rec1).empty() && slurp(rec1) == slurp(rec2),
            "reconstruct sweep outputs differ");

  const fs::path h1 = dir / "hist1.csv", h2 = dir / "hist2.csv";
  const std::string hist_flags = " reconstruct --input " + fixture +
                                 " --histogram --epsilon 0.25"
                                 " --realizations 20000 --seed 17 --output ";
  c.require(run_cmd(cli + hist_flags + h1.string()) == 0, "histogram run 1 failed");
  c.require(run_cmd(cli + hist_flags + h2.string()) == 0, "histogram run 2 failed");
  c.require(!slurp(h1).empty() && slurp(h1) == slurp(h2),
            "histogram outputs differ");

  // manifest replay reproduces the bytes as well
  const fs::path rec3 = dir / "rec3.csv";
  c.require(run_cmd(cli + " rerun --manifest " + rec1.string() +
                    ".manifest.json --output " + rec3.string()) == 0,
            "rerun failed");
  c.require(slurp(rec3) == slurp(rec1), "rerun output differs from the original");

  std::error_code ec;
  fs::remove_all(dir, ec);
  c.finish(120.0);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : SMLINK_CLI_PATH;
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9(cli);
  if (g_failures == 0)
    std::printf("all 9 acceptance criteria passed\n");
  else
    std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
