#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "smlink/rng.hpp"
#include "smlink/types.hpp"

namespace smlink {

// Sampled average power demand of one household.
struct DemandSeries {
  ArrayXd samples;      // x[0..N-1], W, N >= 2, finite, >= 0
  double tau = 0.25;    // sampling interval, h
  std::string label;    // household id
};

void validate(const DemandSeries& s);

struct ErasurePattern {
  ArrayXb received;  // true = sample delivered
};

struct ReconstructionReport {
  ArrayXd reconstructed;       // xhat[0..N-1], W
  double rmsd = 0.0;           // W
  std::int64_t erased_count = 0;
};

struct LoadOptions {
  double tau = 0.25;      // sampling interval of the result, h
  bool resample = false;  // average finer-grained rows into tau-wide bins
};

// Two-column CSV with a one-line header: first column an ISO-8601 timestamp
// ("YYYY-MM-DD HH:MM:SS" or with 'T') or a plain number (sample index, or
// seconds when resampling), second column watts. Rows must be strictly
// increasing in time. With opts.resample, rows are averaged into tau-wide
// bins anchored at the first row's time; an empty interior bin is a GapError.
DemandSeries load_series(const std::filesystem::path& path,
                         const LoadOptions& opts = {});

// Each sample independently erased with probability epsilon in [0, 1).
ErasurePattern draw_erasures(Eigen::Index n, double epsilon, Rng& rng);

// Root-mean-square deviation between a series and its reconstruction.
double rmsd(const ArrayXd& x, const ArrayXd& xhat);

// Linear-interpolation reconstruction across erased runs: received samples are
// copied verbatim; a run erased between received anchors j < k is filled with
// the chord between x[j] and x[k]; a lost head is back-filled with the first
// received value and a lost tail holds the last one. Throws AllErasedError
// when nothing was received.
ReconstructionReport reconstruct(const DemandSeries& s, const ErasurePattern& e);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t count = 0;
};

struct RmsdStats {
  double mean_rmsd = 0.0;
  double stderr_ = 0.0;  // standard error of the mean
  std::vector<HistogramBin> histogram;
  std::int64_t realizations = 0;
  std::int64_t discarded = 0;  // all-erased draws redrawn
};

// Monte Carlo over i.i.d. erasure patterns: mean per-realization RMSD and a
// 50-bin equal-width histogram spanning [0, max observed RMSD]. All-erased
// patterns are discarded and redrawn. Realizations are chunked with sub-seeds
// as in mc_sim, so the result does not depend on the thread count.
RmsdStats rmsd_statistics(const DemandSeries& s, double epsilon,
                          std::int64_t realizations, std::uint64_t seed,
                          unsigned threads = 0);

struct RmsdSweepPoint {
  double epsilon = 0.0;
  double mean_rmsd = 0.0;
  double stderr_ = 0.0;
};

// Mean RMSD per epsilon over the grid (values in [0, 0.25]), in grid order.
std::vector<RmsdSweepPoint> rmsd_sweep(const DemandSeries& s, const ArrayXd& eps_grid,
                                       std::int64_t realizations, std::uint64_t seed,
                                       unsigned threads = 0);

// Exact expectation of the reconstruction RMSD under i.i.d. erasures,
// conditional on at least one sample received: enumerates all 2^N patterns
// weighted by eps^e (1-eps)^(N-e). Rejects N > 20.
double exact_mean_rmsd(const DemandSeries& s, double epsilon);

}  // namespace smlink
