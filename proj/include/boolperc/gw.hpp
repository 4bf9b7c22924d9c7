#pragma once

#include <cstdint>
#include <vector>

#include "boolperc/graph.hpp"
#include "boolperc/radius_law.hpp"
#include "boolperc/rng.hpp"
#include "boolperc/stats.hpp"

// Standalone branching-process machinery for the reproduction law the layer
// domination produces: per radius r up to the law's cap, m_r independent
// indicators fire with probability 1 - q_{r-1}, and each firing contributes
// c_r offspring. The law is finitely supported because the radius law is
// capped.

namespace boolperc {

struct GwBudget {
  std::uint32_t max_generations = 10000;
  std::uint64_t max_population = 1000000;
};

struct XiLaw {
  std::uint32_t r_cap = 0;            ///< radius cap the slots run to
  double p = 0.0;
  std::vector<std::uint64_t> c;       ///< offspring weight per radius, index 1..r_cap
  std::vector<std::uint64_t> slots;   ///< indicator count m_r per radius
  std::vector<double> fire;           ///< firing probability 1 - q_{r-1} per radius
  std::uint64_t max_value = 0;        ///< sum of c_r * m_r
  double mean = 0.0;                  ///< sum of c_r * m_r * (1 - q_{r-1}), exact

  /// Requires a capped law with cap <= profile.r_max and p in [0, 1].
  static XiLaw build(const GrowthProfile& profile, const RadiusLaw& law, double p);
};

/// One draw of xi: every slot is consumed sequentially from the stream, so a
/// draw always advances the cursor by the same amount.
std::uint64_t sample_xi(const XiLaw& xi, RandomStream& stream);

struct GwRun {
  std::vector<std::uint64_t> Z;  ///< Z[0] = 1 (the root), then one entry per generation
  std::uint64_t total = 0;       ///< sum of Z, the total progeny including the root
  bool extinct = false;
  bool budget_hit = false;
};

GwRun run_gw(const XiLaw& xi, RandomStream& stream, const GwBudget& budget = {});

struct TotalSizeTail {
  std::vector<std::uint32_t> grid;
  std::vector<std::uint64_t> exceed;  ///< trials with total > n (budget hits count)
  std::vector<Interval> ci;           ///< Wilson intervals per grid point
  std::uint64_t trials = 0;
  std::uint64_t budget_exceedances = 0;
  LineFit fit;                        ///< weighted LS on log tail over positive bins
  double xi_mean = 0.0;

  double estimate(std::size_t i) const {
    return trials ? static_cast<double>(exceed[i]) / static_cast<double>(trials) : 0.0;
  }
};

/// Monte Carlo tail of the total progeny. Requires E[xi] < 1; a run that
/// exhausts the budget counts as exceeding every grid point (the tail claim
/// stays conservative). Trial i draws from base.derive(i).
TotalSizeTail total_size_tail(const XiLaw& xi, const std::vector<std::uint32_t>& grid,
                              std::uint64_t trials, const RandomStream& base,
                              const GwBudget& budget = {}, unsigned threads = 1);

}  // namespace boolperc
