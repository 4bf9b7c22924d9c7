#include "boolperc/series.hpp"

#include <cmath>
#include <stdexcept>

namespace boolperc {

ExtendedReal sum_series(const std::function<double(std::uint64_t)>& term,
                        const SeriesLimits& limits) {
  double partial = 0.0;
  double prev = -1.0;
  unsigned ratio_streak = 0;
  unsigned settle_streak = 0;
  for (std::uint64_t n = 0; n < limits.horizon; ++n) {
    const double t = term(n);
    if (std::isnan(t) || t < 0.0) {
      throw std::invalid_argument("sum_series: terms must be nonnegative");
    }
    partial += t;
    if (!std::isfinite(partial) || partial > limits.sum_cap) {
      return {SeriesState::Infinite, partial, n + 1, "partial sum exceeded cap"};
    }
    if (prev > 0.0 && t >= prev) {
      if (++ratio_streak >= limits.ratio_run) {
        return {SeriesState::Infinite, partial, n + 1, "term ratio stayed >= 1"};
      }
    } else {
      ratio_streak = 0;
    }
    if (t <= limits.rel_tol * partial) {
      if (++settle_streak >= limits.settle_run) {
        return {SeriesState::Finite, partial, n + 1, "terms settled"};
      }
    } else {
      settle_streak = 0;
    }
    prev = t;
  }
  return {SeriesState::Inconclusive, partial, limits.horizon, "horizon exhausted"};
}

const char* to_string(SeriesState s) {
  switch (s) {
    case SeriesState::Finite: return "finite";
    case SeriesState::Infinite: return "infinite";
    default: return "inconclusive";
  }
}

}  // namespace boolperc
