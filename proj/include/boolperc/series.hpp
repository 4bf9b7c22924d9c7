#pragma once

#include <cstdint>
#include <functional>
#include <string>

// Extended-real series evaluation. Infinite sums that back the critical
// bounds cannot always be resolved from a finite horizon, so every
// evaluator returns one of three states instead of silently truncating:
//   Finite        the series converged (or was a finite sum) and value holds it
//   Infinite      a divergence certificate fired (partial sum blew past the
//                 cap, or term ratios stayed >= 1 long enough)
//   Inconclusive  the horizon ended with neither verdict
// Consumers decide how to act on each state; nothing downstream is allowed
// to treat Inconclusive as a number.

namespace boolperc {

enum class SeriesState { Finite, Infinite, Inconclusive };

struct ExtendedReal {
  SeriesState state = SeriesState::Finite;
  double value = 0.0;   // the sum when Finite, else the partial sum at stop
  std::uint64_t terms = 0;
  std::string note;

  bool finite() const { return state == SeriesState::Finite; }
  bool infinite() const { return state == SeriesState::Infinite; }

  static ExtendedReal make_finite(double value, std::uint64_t terms = 0) {
    return {SeriesState::Finite, value, terms, std::string()};
  }
};

struct SeriesLimits {
  std::uint64_t horizon = 1'000'000;  // max terms examined
  double sum_cap = 1e12;              // partial sum above this is declared divergent
  unsigned ratio_run = 50;            // consecutive term ratios >= 1 to declare divergence
  double rel_tol = 1e-15;             // term below rel_tol * partial counts as settled
  unsigned settle_run = 50;           // consecutive settled terms to declare convergence
};

// Sums term(0) + term(1) + ... with the detectors above. Terms must be
// nonnegative; a negative term throws.
ExtendedReal sum_series(const std::function<double(std::uint64_t)>& term,
                        const SeriesLimits& limits = {});

const char* to_string(SeriesState s);

}  // namespace boolperc
