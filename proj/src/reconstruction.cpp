#include "smlink/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "smlink/parallel.hpp"

namespace smlink {

namespace {

constexpr std::int64_t kChunk = 4096;  // realizations per sub-seeded chunk

}  // namespace

void validate(const DemandSeries& s) {
  if (s.samples.size() < 2) throw ValidationError("series needs at least 2 samples");
  if (!(s.tau > 0.0) || !std::isfinite(s.tau))
    throw ValidationError("tau must be finite and > 0");
  for (Eigen::Index i = 0; i < s.samples.size(); ++i) {
    if (!std::isfinite(s.samples[i]) || s.samples[i] < 0.0)
      throw ValidationError("sample " + std::to_string(i) +
                            " is negative or not finite");
  }
}

ErasurePattern draw_erasures(Eigen::Index n, double epsilon, Rng& rng) {
  if (n < 2) throw ValidationError("pattern length must be >= 2");
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw ValidationError("epsilon must be in [0, 1)");
  ErasurePattern e;
  e.received.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) e.received[i] = !(rng.uniform01() < epsilon);
  return e;
}

double rmsd(const ArrayXd& x, const ArrayXd& xhat) {
  if (x.size() != xhat.size()) throw ValidationError("rmsd: length mismatch");
  return std::sqrt((xhat - x).square().mean());
}

ReconstructionReport reconstruct(const DemandSeries& s, const ErasurePattern& e) {
  validate(s);
  const Eigen::Index n = s.samples.size();
  if (e.received.size() != n)
    throw ValidationError("erasure pattern length does not match the series");

  ReconstructionReport rep;
  rep.reconstructed = s.samples;  // received indices stay verbatim
  rep.erased_count = n - e.received.count();
  if (rep.erased_count == n)
    throw AllErasedError("no sample was received; reconstruction is undefined");

  Eigen::Index i = 0;
  Eigen::Index prev = -1;  // last received index seen
  while (i < n) {
    if (e.received[i]) {
      prev = i;
      ++i;
      continue;
    }
    Eigen::Index next = i + 1;
    while (next < n && !e.received[next]) ++next;

    if (prev < 0) {
      // Lost head: no left anchor, back-fill with the first received value.
      rep.reconstructed.segment(i, next - i).setConstant(s.samples[next]);
    } else if (next >= n) {
      // Lost tail: hold the last received value.
      rep.reconstructed.segment(i, n - i).setConstant(s.samples[prev]);
    } else {
      const double a = s.samples[prev];
      const double b = s.samples[next];
      const double span = static_cast<double>(next - prev);
      for (Eigen::Index j = i; j < next; ++j) {
        const double v =
            (a * static_cast<double>(next - j) + b * static_cast<double>(j - prev)) /
            span;
        // Rounding can push the quotient an ulp past the anchors; keep it inside.
        rep.reconstructed[j] = std::clamp(v, std::min(a, b), std::max(a, b));
      }
    }
    i = next;
  }

  rep.rmsd = rmsd(s.samples, rep.reconstructed);
  return rep;
}

RmsdStats rmsd_statistics(const DemandSeries& s, double epsilon,
                          std::int64_t realizations, std::uint64_t seed,
                          unsigned threads) {
  validate(s);
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw ValidationError("epsilon must be in [0, 1)");
  if (realizations < 1) throw ValidationError("realizations must be >= 1");

  const Eigen::Index n = s.samples.size();
  const std::int64_t m = realizations;
  std::vector<double> rmsds(static_cast<std::size_t>(m), 0.0);
  const std::size_t n_chunks = static_cast<std::size_t>((m + kChunk - 1) / kChunk);
  std::vector<std::int64_t> discards(n_chunks, 0);

  for_each_chunk(n_chunks, threads, [&](std::size_t c) {
    Rng rng(sub_seed(seed, c));
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min<std::int64_t>(begin + kChunk, m);
    for (std::int64_t r = begin; r < end; ++r) {
      for (;;) {
        ErasurePattern pat = draw_erasures(n, epsilon, rng);
        if (pat.received.count() == 0) {
          ++discards[c];  // all erased: redraw
          continue;
        }
        rmsds[static_cast<std::size_t>(r)] = reconstruct(s, pat).rmsd;
        break;
      }
    }
  });

  RmsdStats out;
  out.realizations = m;
  for (std::int64_t d : discards) out.discarded += d;

  double sum = 0.0;
  double max_rmsd = 0.0;
  for (double r : rmsds) {
    sum += r;
    max_rmsd = std::max(max_rmsd, r);
  }
  out.mean_rmsd = sum / static_cast<double>(m);

  double ss = 0.0;
  for (double r : rmsds) ss += (r - out.mean_rmsd) * (r - out.mean_rmsd);
  out.stderr_ = m > 1 ? std::sqrt(ss / static_cast<double>(m - 1)) /
                            std::sqrt(static_cast<double>(m))
                      : 0.0;

  // 50 equal-width bins over [0, max]; the last bin is closed above.
  constexpr int kBins = 50;
  const double span = max_rmsd > 0.0 ? max_rmsd : 1.0;
  out.histogram.resize(kBins);
  for (int b = 0; b < kBins; ++b) {
    out.histogram[b].lo = span * b / kBins;
    out.histogram[b].hi = span * (b + 1) / kBins;
  }
  for (double r : rmsds) {
    int b = std::min(static_cast<int>(r / span * kBins), kBins - 1);
    ++out.histogram[b].count;
  }
  return out;
}

std::vector<RmsdSweepPoint> rmsd_sweep(const DemandSeries& s, const ArrayXd& eps_grid,
                                       std::int64_t realizations, std::uint64_t seed,
                                       unsigned threads) {
  if (eps_grid.size() == 0) throw ValidationError("epsilon grid must be nonempty");
  for (Eigen::Index i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] >= 0.0 && eps_grid[i] <= 0.25))
      throw ValidationError("sweep epsilon values must be in [0, 0.25]");
  }
  std::vector<RmsdSweepPoint> out;
  out.reserve(static_cast<std::size_t>(eps_grid.size()));
  for (Eigen::Index i = 0; i < eps_grid.size(); ++i) {
    const RmsdStats st = rmsd_statistics(s, eps_grid[i], realizations, seed, threads);
    out.push_back({eps_grid[i], st.mean_rmsd, st.stderr_});
  }
  return out;
}

double exact_mean_rmsd(const DemandSeries& s, double epsilon) {
  validate(s);
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw ValidationError("epsilon must be in [0, 1)");
  const Eigen::Index n = s.samples.size();
  if (n > 20) throw ValidationError("exact enumeration is limited to N <= 20");

  // E[RMSD | at least one sample received]; matches the discard-and-redraw
  // semantics of rmsd_statistics.
  const std::uint64_t total = std::uint64_t{1} << n;
  double acc = 0.0;
  ErasurePattern pat;
  pat.received.resize(n);
  for (std::uint64_t mask = 1; mask < total; ++mask) {  // mask bit = received
    int received = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      pat.received[i] = ((mask >> i) & 1u) != 0;
      received += pat.received[i] ? 1 : 0;
    }
    const double weight = std::pow(1.0 - epsilon, received) *
                          std::pow(epsilon, static_cast<double>(n - received));
    acc += weight * reconstruct(s, pat).rmsd;
  }
  const double p_all_erased = std::pow(epsilon, static_cast<double>(n));
  return acc / (1.0 - p_all_erased);
}

}  // namespace smlink
