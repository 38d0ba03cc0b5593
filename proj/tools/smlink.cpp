// smlink: closed-form optimization, Monte Carlo validation, and demand-signal
// reconstruction for a secondary meter-to-aggregator link sharing a cellular
// uplink. Subcommands emit JSON/CSV for external plotting; every Monte Carlo
// command is reproducible from its seed, and file outputs carry a manifest
// that the `rerun` subcommand replays byte-identically.

#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smlink/analytic_model.hpp"
#include "smlink/mc_sim.hpp"
#include "smlink/optimizer.hpp"
#include "smlink/reconstruction.hpp"
#include "smlink/version.hpp"

using json = nlohmann::ordered_json;
using namespace smlink;

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string iso8601_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ArrayXd make_grid(double from, double to, long points, const std::string& scale) {
  if (points < 1) throw ValidationError("points must be >= 1");
  if (points == 1) {
    ArrayXd g(1);
    g << from;
    return g;
  }
  if (scale == "log") {
    if (!(from > 0.0) || !(to > 0.0))
      throw ValidationError("log scale needs positive endpoints");
    return ArrayXd::LinSpaced(points, std::log(from), std::log(to)).exp();
  }
  return ArrayXd::LinSpaced(points, from, to);
}

LinkParams params_from(const json& p) {
  LinkParams lp;
  lp.lambda_ = p.at("lambda").get<double>();
  lp.alpha = p.at("alpha").get<double>();
  lp.d = p.at("d").get<double>();
  lp.w_p = p.at("wp").get<double>();
  lp.w_s = p.contains("ws") ? p.at("ws").get<double>() : 1.0;
  return lp;
}

SolverOptions solver_from(const json& p) {
  SolverOptions opts;
  opts.tol = p.at("tol").get<double>();
  opts.bracket_hi = p.at("bracket_hi").get<double>();
  return opts;
}

json solution_json(const ConstrainedSolution& sol) {
  json r;
  r["beta_star"] = sol.point.beta;
  r["ws_star"] = sol.point.w_s;
  r["psuc"] = sol.point.p_suc;
  r["throughput"] = sol.point.throughput;
  r["branch"] = to_string(sol.branch);
  if (sol.branch == Branch::OutageBinding) r["t_approx"] = sol.t_approx;
  return r;
}

// ---- runners: resolved parameters in, output payload out -------------------

std::string run_optimize(const json& p, unsigned /*threads*/) {
  const Constraints c{p.at("wmax").get<double>(), p.at("epsilon").get<double>()};
  const ConstrainedSolution sol =
      constrained_optimum(params_from(p), c, solver_from(p));
  json out;
  out["command"] = "optimize";
  out["parameters"] = p;
  out["result"] = solution_json(sol);
  return out.dump(2) + "\n";
}

std::string run_sweep(const json& p, unsigned /*threads*/) {
  const std::string axis_name = p.at("axis").get<std::string>();
  SweepAxis axis;
  if (axis_name == "lambda")
    axis = SweepAxis::Lambda;
  else if (axis_name == "wmax")
    axis = SweepAxis::WMax;
  else if (axis_name == "epsilon")
    axis = SweepAxis::Epsilon;
  else
    throw ValidationError("axis must be one of lambda|wmax|epsilon");

  const ArrayXd grid = make_grid(p.at("from").get<double>(), p.at("to").get<double>(),
                                 p.at("points").get<long>(),
                                 p.at("scale").get<std::string>());
  const Constraints c{p.at("wmax").get<double>(), p.at("epsilon").get<double>()};
  const auto points = sweep(params_from(p), c, axis, grid, solver_from(p));

  std::string csv = "axis,beta_star,ws_star,psuc,throughput,branch\n";
  std::size_t ok = 0;
  for (const auto& pt : points) {
    if (pt.ok) {
      const auto& op = pt.solution.point;
      csv += fmt(pt.axis_value) + ',' + fmt(op.beta) + ',' + fmt(op.w_s) + ',' +
             fmt(op.p_suc) + ',' + fmt(op.throughput) + ',' +
             to_string(pt.solution.branch) + '\n';
      ++ok;
    } else {
      std::string reason = pt.error;
      for (char& ch : reason)
        if (ch == ',' || ch == '\n') ch = ';';
      csv += fmt(pt.axis_value) + ",ERROR:" + reason + '\n';
    }
  }
  if (ok == 0) throw Error("every sweep point failed");
  return csv;
}

std::string run_simulate(const json& p, unsigned threads) {
  const LinkParams lp = params_from(p);
  const double beta = p.at("beta").get<double>();
  SimConfig cfg;
  cfg.samples = p.at("samples").get<std::int64_t>();
  cfg.window_radius = p.at("radius").get<double>();
  cfg.seed = p.at("seed").get<std::uint64_t>();

  const EmpiricalPsuc est = empirical_psuc(lp, beta, cfg, threads);
  const double analytic = success_probability(lp, beta);
  const double sigma =
      std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(est.samples));
  const double z = sigma > 0.0 ? (est.estimate - analytic) / sigma : 0.0;

  json out;
  out["command"] = "simulate";
  out["parameters"] = p;
  json& r = out["result"];
  r["analytic_psuc"] = analytic;
  r["empirical_psuc"] = est.estimate;
  r["stderr"] = est.stderr_;
  r["z_score"] = z;
  r["samples"] = est.samples;
  r["window_radius"] = est.window_radius;
  r["seed"] = est.seed;
  return out.dump(2) + "\n";
}

std::string run_reconstruct(const json& p, unsigned threads) {
  LoadOptions load;
  load.tau = p.at("tau").get<double>();
  load.resample = p.at("resample").get<bool>();
  const DemandSeries series = load_series(p.at("input").get<std::string>(), load);

  const std::int64_t realizations = p.at("realizations").get<std::int64_t>();
  const std::uint64_t seed = p.at("seed").get<std::uint64_t>();
  const bool exact = p.at("exact").get<bool>();

  if (p.contains("sweep")) {
    const auto& sw = p.at("sweep");
    const ArrayXd grid = make_grid(sw.at(0).get<double>(), sw.at(1).get<double>(),
                                   static_cast<long>(sw.at(2).get<double>()),
                                   "linear");
    std::string csv = "epsilon,mean_rmsd,stderr,realizations,seed\n";
    if (exact) {
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= 0.25))
          throw ValidationError("sweep epsilon values must be in [0, 0.25]");
        csv += fmt(grid[i]) + ',' + fmt(exact_mean_rmsd(series, grid[i])) +
               ",0,0," + std::to_string(seed) + '\n';
      }
    } else {
      for (const auto& pt : rmsd_sweep(series, grid, realizations, seed, threads))
        csv += fmt(pt.epsilon) + ',' + fmt(pt.mean_rmsd) + ',' + fmt(pt.stderr_) +
               ',' + std::to_string(realizations) + ',' + std::to_string(seed) +
               '\n';
    }
    return csv;
  }

  const double epsilon = p.at("epsilon").get<double>();

  if (p.at("histogram").get<bool>()) {
    const RmsdStats st = rmsd_statistics(series, epsilon, realizations, seed, threads);
    std::string csv = "bin_lo,bin_hi,count\n";
    for (const auto& bin : st.histogram)
      csv += fmt(bin.lo) + ',' + fmt(bin.hi) + ',' + std::to_string(bin.count) + '\n';
    return csv;
  }

  json out;
  out["command"] = "reconstruct";
  out["parameters"] = p;
  json& r = out["result"];
  r["label"] = series.label;
  r["n"] = series.samples.size();
  r["tau"] = series.tau;
  r["epsilon"] = epsilon;

  if (exact) {
    r["exact_mean_rmsd"] = exact_mean_rmsd(series, epsilon);
    return out.dump(2) + "\n";
  }

  // single-run report: one erasure pattern drawn from the seed
  Rng rng(seed);
  const ErasurePattern pattern = draw_erasures(series.samples.size(), epsilon, rng);
  const ReconstructionReport rep = reconstruct(series, pattern);
  r["seed"] = seed;
  r["erased_count"] = rep.erased_count;
  r["rmsd"] = rep.rmsd;
  r["original"] = std::vector<double>(series.samples.begin(), series.samples.end());
  r["received"] = std::vector<bool>(pattern.received.begin(), pattern.received.end());
  r["reconstructed"] =
      std::vector<double>(rep.reconstructed.begin(), rep.reconstructed.end());
  return out.dump(2) + "\n";
}

std::string dispatch(const std::string& command, const json& params,
                     unsigned threads) {
  if (command == "optimize") return run_optimize(params, threads);
  if (command == "sweep") return run_sweep(params, threads);
  if (command == "simulate") return run_simulate(params, threads);
  if (command == "reconstruct") return run_reconstruct(params, threads);
  throw ValidationError("unknown command in manifest: " + command);
}

void emit(const std::string& command, const json& params, unsigned threads) {
  json run_params = params;  // the payload embeds the model parameters only;
  run_params.erase("output");  // the output path lives in the manifest
  const std::string payload = dispatch(command, run_params, threads);
  if (!params.contains("output")) {
    std::cout << payload;
    return;
  }
  const std::string path = params.at("output").get<std::string>();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << payload;
  out.close();

  json manifest;
  manifest["command"] = command;
  manifest["parameters"] = params;
  manifest["seed"] = params.contains("seed") ? params.at("seed").get<std::uint64_t>()
                                             : std::uint64_t{0};
  manifest["tool_version"] = kVersion;
  manifest["timestamp"] = iso8601_now();
  std::ofstream mf(path + ".manifest.json", std::ios::binary);
  if (!mf) throw Error("cannot write " + path + ".manifest.json");
  mf << manifest.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secondary-link throughput optimizer and outage-erasure "
               "reconstruction toolkit"};
  app.set_version_flag("--version", std::string("smlink ") + kVersion);
  app.require_subcommand(1);

  unsigned threads = 0;  // 0: SMLINK_THREADS env var, then hardware concurrency
  app.add_option("--threads", threads, "worker threads for Monte Carlo runs");

  auto* opt = app.add_subcommand(
      "optimize", "solve the constrained throughput maximization (JSON)");
  struct {
    double lambda = 0, alpha = 0, d = 0, wp = 0, wmax = 0, epsilon = 0;
    double tol = 1e-10, bracket_hi = 1e6;
    std::string output;
  } o;
  opt->add_option("--lambda", o.lambda, "interferer density [1/m^2]")->required();
  opt->add_option("--alpha", o.alpha, "path-loss exponent, in (2, 6]")->required();
  opt->add_option("--d", o.d, "meter-aggregator distance [m]")->required();
  opt->add_option("--wp", o.wp, "primary transmit power [W]")->required();
  opt->add_option("--wmax", o.wmax, "secondary power cap [W]")->required();
  opt->add_option("--epsilon", o.epsilon, "outage cap, in (0, 0.25]")->required();
  opt->add_option("--tol", o.tol, "root-finder tolerance");
  opt->add_option("--bracket-hi", o.bracket_hi, "root-finder bracket limit");
  opt->add_option("--output", o.output, "write JSON here (plus manifest)");

  auto* sw = app.add_subcommand(
      "sweep", "optimal throughput along one parameter axis (CSV)");
  struct {
    std::string axis, scale = "linear";
    double from = 0, to = 0;
    long points = 0;
    double lambda = 0.25, alpha = 4.0, d = 1.0, wp = 1.0, wmax = 0.5,
           epsilon = 0.05;
    double tol = 1e-10, bracket_hi = 1e6;
    std::string output;
  } s;
  sw->add_option("--axis", s.axis, "lambda|wmax|epsilon")
      ->required()
      ->check(CLI::IsMember({"lambda", "wmax", "epsilon"}));
  sw->add_option("--from", s.from, "first grid value")->required();
  sw->add_option("--to", s.to, "last grid value")->required();
  sw->add_option("--points", s.points, "grid size")->required();
  sw->add_option("--scale", s.scale, "linear|log")
      ->check(CLI::IsMember({"linear", "log"}));
  sw->add_option("--lambda", s.lambda, "interferer density [1/m^2]");
  sw->add_option("--alpha", s.alpha, "path-loss exponent");
  sw->add_option("--d", s.d, "meter-aggregator distance [m]");
  sw->add_option("--wp", s.wp, "primary transmit power [W]");
  sw->add_option("--wmax", s.wmax, "secondary power cap [W]");
  sw->add_option("--epsilon", s.epsilon, "outage cap");
  sw->add_option("--tol", s.tol, "root-finder tolerance");
  sw->add_option("--bracket-hi", s.bracket_hi, "root-finder bracket limit");
  sw->add_option("--output", s.output, "write CSV here (plus manifest)");

  auto* sim = app.add_subcommand(
      "simulate", "Monte Carlo check of the success probability (JSON)");
  struct {
    double lambda = 0.25, alpha = 4.0, d = 1.0, wp = 1.0, ws = 1.0, beta = 1.0;
    std::int64_t samples = 100000;
    double radius = 0.0;
    std::uint64_t seed = 1;
    std::string output;
  } m;
  sim->add_option("--lambda", m.lambda, "interferer density [1/m^2]");
  sim->add_option("--alpha", m.alpha, "path-loss exponent");
  sim->add_option("--d", m.d, "meter-aggregator distance [m]");
  sim->add_option("--wp", m.wp, "primary transmit power [W]");
  sim->add_option("--ws", m.ws, "secondary transmit power [W]");
  sim->add_option("--beta", m.beta, "SIR decoding threshold");
  sim->add_option("--samples", m.samples, "field realizations");
  sim->add_option("--radius", m.radius, "window radius [m], 0 = default");
  sim->add_option("--seed", m.seed, "RNG seed");
  sim->add_option("--output", m.output, "write JSON here (plus manifest)");

  auto* rec = app.add_subcommand(
      "reconstruct", "erasure/reconstruction experiments on a demand series");
  struct {
    std::string input;
    double tau = 0.25;
    bool resample = false;
    double epsilon = 0.05;
    std::int64_t realizations = 100000;
    std::uint64_t seed = 1;
    std::vector<double> sweep;
    bool histogram = false;
    bool exact = false;
    std::string output;
  } r;
  rec->add_option("--input", r.input, "two-column CSV (time, watts)")->required();
  rec->add_option("--tau", r.tau, "sampling interval [h]");
  rec->add_flag("--resample", r.resample, "average rows into tau-wide bins");
  rec->add_option("--epsilon", r.epsilon, "erasure probability");
  rec->add_option("--realizations", r.realizations, "Monte Carlo patterns");
  rec->add_option("--seed", r.seed, "RNG seed");
  rec->add_option("--sweep", r.sweep, "epsilon sweep: FROM TO POINTS (CSV out)")
      ->expected(3);
  rec->add_flag("--histogram", r.histogram, "emit the RMSD histogram (CSV out)");
  rec->add_flag("--exact", r.exact, "exhaustive 2^N expectation (N <= 20)");
  rec->add_option("--output", r.output, "write result here (plus manifest)");

  auto* rr = app.add_subcommand("rerun", "replay a command from its manifest");
  struct {
    std::string manifest;
    std::string output;
  } rn;
  rr->add_option("--manifest", rn.manifest, "manifest JSON path")->required();
  rr->add_option("--output", rn.output, "override the recorded output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (opt->parsed()) {
      json p;
      p["lambda"] = o.lambda;
      p["alpha"] = o.alpha;
      p["d"] = o.d;
      p["wp"] = o.wp;
      p["wmax"] = o.wmax;
      p["epsilon"] = o.epsilon;
      p["tol"] = o.tol;
      p["bracket_hi"] = o.bracket_hi;
      if (!o.output.empty()) p["output"] = o.output;
      emit("optimize", p, threads);
    } else if (sw->parsed()) {
      json p;
      p["axis"] = s.axis;
      p["from"] = s.from;
      p["to"] = s.to;
      p["points"] = s.points;
      p["scale"] = s.scale;
      p["lambda"] = s.lambda;
      p["alpha"] = s.alpha;
      p["d"] = s.d;
      p["wp"] = s.wp;
      p["wmax"] = s.wmax;
      p["epsilon"] = s.epsilon;
      p["tol"] = s.tol;
      p["bracket_hi"] = s.bracket_hi;
      if (!s.output.empty()) p["output"] = s.output;
      emit("sweep", p, threads);
    } else if (sim->parsed()) {
      json p;
      p["lambda"] = m.lambda;
      p["alpha"] = m.alpha;
      p["d"] = m.d;
      p["wp"] = m.wp;
      p["ws"] = m.ws;
      p["beta"] = m.beta;
      p["samples"] = m.samples;
      p["radius"] = m.radius;
      p["seed"] = m.seed;
      if (!m.output.empty()) p["output"] = m.output;
      emit("simulate", p, threads);
    } else if (rec->parsed()) {
      json p;
      p["input"] = r.input;
      p["tau"] = r.tau;
      p["resample"] = r.resample;
      p["epsilon"] = r.epsilon;
      p["realizations"] = r.realizations;
      p["seed"] = r.seed;
      if (!r.sweep.empty()) p["sweep"] = r.sweep;
      p["histogram"] = r.histogram;
      p["exact"] = r.exact;
      if (!r.output.empty()) p["output"] = r.output;
      emit("reconstruct", p, threads);
    } else if (rr->parsed()) {
      std::ifstream in(rn.manifest);
      if (!in) throw ValidationError("cannot open manifest " + rn.manifest);
      json manifest = json::parse(in);
      json p = manifest.at("parameters");
      if (!rn.output.empty()) p["output"] = rn.output;
      emit(manifest.at("command").get<std::string>(), p, threads);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
