#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boolperc/graph.hpp"
#include "boolperc/gw.hpp"
#include "boolperc/ppp.hpp"
#include "boolperc/radius_law.hpp"
#include "boolperc/rng.hpp"
#include "boolperc/sampler.hpp"
#include "boolperc/stats.hpp"

// Monte Carlo experiments over replicated draws. Replicate i always uses
// base.derive(i), results are folded over the replicate index in order, so a
// run is reproducible from (seed, trials) alone regardless of thread count.

namespace boolperc {

struct TailCurve {
  std::vector<std::uint32_t> grid;
  std::vector<std::uint64_t> exceed;     ///< censored replicates count at every n
  std::vector<Interval> ci;              ///< Wilson intervals per grid point
  std::vector<std::uint64_t> size_hist;  ///< |W_rho| histogram, uncensored only
  std::uint64_t trials = 0;
  std::uint64_t censored = 0;            ///< root component touched the window edge
  bool unreliable = false;               ///< censored fraction above one fifth

  double estimate(std::size_t i) const {
    return trials ? static_cast<double>(exceed[i]) / static_cast<double>(trials) : 0.0;
  }
};

/// Estimates P(|W_rho| > n) over the grid. A replicate whose root component
/// reaches the window edge is right-censored: the true component is at least
/// as large, so it counts as exceeding every grid point.
TailCurve tail_experiment(const GraphView& g, const RadiusLaw& law, double p,
                          const std::vector<std::uint32_t>& grid, std::uint64_t trials,
                          const RandomStream& base, const SampleOptions& opt = {},
                          unsigned threads = 1);

struct SweepPoint {
  double p = 0.0;
  std::uint64_t reached = 0;  ///< replicates whose root component hit the edge
  Interval ci;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::uint64_t trials = 0;
  double pc_lower = 0.0;  ///< certified lower bound on the critical p, if finite
  bool pc_finite = false;
};

/// Frequency of reaching the window edge as p varies. Every p shares the same
/// replicate streams, and activation is a threshold on one uniform per vertex,
/// so the reach indicator is monotone in p replicate by replicate and the
/// reported frequencies never decrease along an increasing grid.
SweepResult sweep_p(const GraphView& g, const RadiusLaw& law,
                    const std::vector<double>& p_grid, std::uint64_t trials,
                    const RandomStream& base, const SampleOptions& opt = {},
                    unsigned threads = 1);

struct DecayFit {
  double lambda = 0.0;    ///< decay rate, minus the fitted slope
  double slope_se = 0.0;
  double r_squared = 0.0;
  std::uint32_t points_used = 0;
  bool ok = false;
  bool non_decaying = false;  ///< slope came out flat or rising; lambda forced to 0
  std::string note;
};

/// Weighted least squares on log P(|W_rho| > n) for n in [n_lo, n_hi].
/// Refuses to fit when fewer than five grid points in the window have a
/// nonzero estimate, and drops bins whose exceedance count is dominated by
/// censoring (censored > exceed / 2) rather than pretending they decay.
DecayFit fit_decay(const TailCurve& curve, std::uint32_t n_lo, std::uint32_t n_hi);

struct BootstrapSlope {
  double lo = 0.0;
  double hi = 0.0;
  std::uint32_t resamples_used = 0;  ///< resamples whose refit succeeded
};

/// Percentile bootstrap for the decay rate: resamples replicates from the
/// curve's size histogram plus its censored atom, rebuilds the exceedance
/// counts, and refits. Returns the two-sided (1 - alpha) percentile interval.
BootstrapSlope bootstrap_lambda(const TailCurve& curve, std::uint32_t n_lo,
                                std::uint32_t n_hi, std::uint32_t resamples,
                                double alpha, const RandomStream& base);

struct VerifyRow {
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
};

struct VerifyReport {
  // Exactly four checks, in order: pushforward_identity, exploration_inclusion,
  // gw_domination, mark_uniqueness. Escapes and budget stops are tallied
  // separately; the checks they make unsound are skipped, not failed.
  std::vector<VerifyRow> rows;
  std::uint64_t escaped = 0;
  std::uint64_t budget_hits = 0;

  bool all_passed() const;
};

/// Per-replicate certification of the couplings. pushforward_identity: the wet
/// set read off the level field equals the wet set of the per-ball counts it
/// pushes forward to. exploration_inclusion: the root's wet component in a full
/// realization extending the exploration stays inside the explored layers
/// (skipped when the exploration escaped the window or hit its budget).
/// gw_domination: layer sizes are dominated by the coupled branching process
/// (skipped on escape). mark_uniqueness: no mark key was drawn twice.
VerifyReport verify_couplings(const GraphView& g, const RadiusLaw& law, double p,
                              std::uint64_t trials, const RandomStream& base,
                              const ExploreBudget& budget = {}, unsigned threads = 1);

struct SampleRow {
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  std::uint64_t size_w = 0;
  std::uint64_t size_wrho = 0;
  bool escaped = false;
  std::uint64_t n_components = 0;
};

/// One sample_direct draw per replicate, summarized row by row.
std::vector<SampleRow> sample_experiment(const GraphView& g, const RadiusLaw& law,
                                         double p, std::uint64_t trials,
                                         const RandomStream& base,
                                         const SampleOptions& opt = {},
                                         unsigned threads = 1);

// CSV writers. Floats are printed with %.17g so identical results are
// byte-identical files.
void write_tail_csv(const std::string& path, const TailCurve& curve);
void write_sweep_csv(const std::string& path, const SweepResult& sweep);
void write_gw_csv(const std::string& path, const TotalSizeTail& tail);
void write_verify_csv(const std::string& path, const VerifyReport& report);
void write_sample_csv(const std::string& path, const std::vector<SampleRow>& rows);

/// Canonical float formatting used by every writer.
std::string format_double(double v);

}  // namespace boolperc
