#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boolperc/graph.hpp"
#include "boolperc/radius_law.hpp"
#include "boolperc/series.hpp"

namespace boolperc {

// Cumulative cost of growing a cluster level by level:
//   phi(n) = sum_{r=1}^{n} c_r * max(delta * s_top_{r-1}, c_top_r).
// Requires n <= profile.r_max. phi(0) = 0.
double phi(const GrowthProfile& profile, std::uint32_t n);

// Exponential-weight variant used for moment bounds:
//   psi(t, n) = sum_{r=1}^{n} c_top_r * exp(t * c_r).
double psi(const GrowthProfile& profile, double t, std::uint32_t n);

// Degree-only ceiling valid on any graph whose joint degree is at most delta:
//   phi(n) <= 2*delta/(delta^2 - 1) * (delta^{2n} - 1)   for delta >= 2,
// and phi(n) <= 4n when delta <= 1. Used to bound levels past the measured
// profile. May overflow to +inf for large n; callers treat that as "diverged".
double phi_degree_ceiling(std::uint32_t delta, std::uint32_t n);

// One level of a bound sum, kept for diagnostics: which branch of the
// max() supplied the slot count, and the level's contribution.
struct LevelTerm {
  std::uint32_t r = 0;
  double c = 0.0;
  double slots = 0.0;
  bool degree_branch = false;  // true when delta*s_top_{r-1} won the max
  double term = 0.0;
};

// Exact per-level terms c_r * slots_r * weight(r) for r = 1..n (n <= r_max).
// weight(r) multiplies the level term; pass 1 to get phi increments.
std::vector<LevelTerm> phi_level_terms(const GrowthProfile& profile, std::uint32_t n);

// A series evaluated exactly while the growth profile covers it and bounded
// by the degree ceiling beyond. When `sum` is Finite it is a valid upper
// bound for the true series; Infinite means the exact prefix already
// diverged; Inconclusive means only the ceiling tail diverged, so nothing
// is certified either way.
struct TailBoundSum {
  ExtendedReal sum;
  std::uint32_t exact_levels = 0;   // levels r = 1..exact_levels used profile data
  bool used_degree_ceiling = false;
  std::vector<LevelTerm> head;      // first exact levels, for reporting
};

// E[phi(R)] for R ~ law, via the level decomposition
//   E[phi(R)] = sum_{n>=0} c_{n+1} * slots_{n+1} * P(R > n).
// Capped laws need profile.r_max >= cap and evaluate exactly.
TailBoundSum mean_phi(const GrowthProfile& profile, const RadiusLaw& law,
                      const SeriesLimits& limits = {});

// Lower bound on the critical activation probability: 1 / E[phi(R)].
// value is 0 when the mean is not certified finite; state mirrors the mean.
ExtendedReal pc_lower_bound(const GrowthProfile& profile, const RadiusLaw& law,
                            const SeriesLimits& limits = {});

struct SubcriticalCheck {
  double p = 0.0;
  TailBoundSum sum;       // sum_{n>=0} c_{n+1} * slots_{n+1} * (1 - q_n)
  double margin = 0.0;    // certification slack demanded below 1
  bool holds = false;     // Finite and sum.value < 1 - margin
};

// Certifies p * E[phi(R)] < 1, the condition under which the occupied
// cluster of any root is dominated by a subcritical branching process.
SubcriticalCheck check_subcritical(const GrowthProfile& profile, const RadiusLaw& law,
                                   double p, double margin = 1e-9,
                                   const SeriesLimits& limits = {});

struct ExpoCheck {
  double p = 0.0;
  double t = 0.0;
  TailBoundSum sum;       // sum_{n>=0} c_top_{n+1} * exp(t*c_{n+1}) * (1 - q_n)
  bool holds = false;     // Finite
};

// Certifies the exponential-moment series at rate t converges, which powers
// exponential decay of cluster-size tails in the subcritical phase.
ExpoCheck check_expo(const GrowthProfile& profile, const RadiusLaw& law,
                     double p, double t, const SeriesLimits& limits = {});

// Mean offspring weight of the dominating branching process; identical
// series to the subcriticality sum.
ExtendedReal xi_mean(const GrowthProfile& profile, const RadiusLaw& law,
                     double p, const SeriesLimits& limits = {});

// Upper bound on log E[exp(t * xi)] for the dominating offspring variable:
// delta times the exponential-moment series.
ExtendedReal xi_log_mgf_bound(const GrowthProfile& profile, const RadiusLaw& law,
                              double p, double t, const SeriesLimits& limits = {});

}  // namespace boolperc
