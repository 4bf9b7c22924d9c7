#include "boolperc/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace boolperc {

namespace {

constexpr std::size_t kHeadRows = 64;

LevelTerm level_term(const GrowthProfile& g, std::uint32_t r, double weight) {
  LevelTerm lt;
  lt.r = r;
  lt.c = static_cast<double>(g.c[r]);
  const double degree_slots = static_cast<double>(g.delta) * static_cast<double>(g.s_top[r - 1]);
  const double ball_slots = static_cast<double>(g.c_top[r]);
  lt.degree_branch = degree_slots >= ball_slots;
  lt.slots = lt.degree_branch ? degree_slots : ball_slots;
  lt.term = lt.c * lt.slots * weight;
  return lt;
}

// Shared evaluator: exact levels r = 1..r_max from the profile, then a
// degree-only ceiling per level. exact_term(n) must return the level term
// for r = n+1; ceiling_term(n) the ceiling for the same level.
template <class ExactFn, class CeilFn>
TailBoundSum evaluate_tail_sum(const GrowthProfile& g, const RadiusLaw& law,
                               ExactFn&& exact_term, CeilFn&& ceiling_term,
                               const SeriesLimits& limits) {
  TailBoundSum out;

  if (law.has_cap()) {
    if (g.r_max < law.cap()) {
      throw std::invalid_argument("growth profile must cover the radius cap (r_max >= cap)");
    }
    double sum = 0.0;
    for (std::uint32_t n = 0; n < law.cap(); ++n) {
      LevelTerm lt = exact_term(n);
      sum += lt.term;
      if (out.head.size() < kHeadRows) out.head.push_back(lt);
    }
    out.exact_levels = law.cap();
    out.sum = ExtendedReal::make_finite(sum, law.cap());
    out.sum.note = "capped radius law, exact sum";
    return out;
  }

  // Exact prefix. Settling is disabled (rel_tol = 0) so that every measured
  // level is accumulated; only genuinely zero tails terminate early.
  SeriesLimits exact_limits = limits;
  exact_limits.horizon = g.r_max;
  exact_limits.rel_tol = 0.0;
  ExtendedReal prefix = sum_series(
      [&](std::uint64_t n) {
        LevelTerm lt = exact_term(static_cast<std::uint32_t>(n));
        if (out.head.size() < kHeadRows) out.head.push_back(lt);
        return lt.term;
      },
      exact_limits);
  out.exact_levels = static_cast<std::uint32_t>(prefix.terms);

  if (prefix.state == SeriesState::Infinite) {
    out.sum = prefix;
    out.sum.note = "exact levels diverge: " + prefix.note;
    return out;
  }
  if (prefix.state == SeriesState::Finite) {
    // Only possible when the remaining tail is exactly zero.
    out.sum = prefix;
    return out;
  }

  // Ceiling for every level past the profile.
  ExtendedReal rest = sum_series(
      [&](std::uint64_t m) { return ceiling_term(g.r_max + static_cast<std::uint32_t>(m)); },
      limits);

  out.used_degree_ceiling = rest.value > 0.0;
  if (rest.state == SeriesState::Finite) {
    out.sum = ExtendedReal::make_finite(prefix.value + rest.value, prefix.terms + rest.terms);
    if (out.used_degree_ceiling) {
      out.sum.note = "levels past the profile bounded by the degree ceiling";
    }
    return out;
  }
  out.sum.state = SeriesState::Inconclusive;
  out.sum.value = prefix.value + rest.value;
  out.sum.terms = prefix.terms + rest.terms;
  out.sum.note = "degree ceiling diverges past the profile; series not certified";
  return out;
}

double clamped_log_delta(std::uint32_t delta) {
  return delta <= 1 ? 0.0 : std::log(static_cast<double>(delta));
}

}  // namespace

double phi(const GrowthProfile& profile, std::uint32_t n) {
  if (n > profile.r_max) {
    throw std::invalid_argument("phi: level exceeds the profile horizon");
  }
  double sum = 0.0;
  for (std::uint32_t r = 1; r <= n; ++r) sum += level_term(profile, r, 1.0).term;
  return sum;
}

double psi(const GrowthProfile& profile, double t, std::uint32_t n) {
  if (n > profile.r_max) {
    throw std::invalid_argument("psi: level exceeds the profile horizon");
  }
  double sum = 0.0;
  for (std::uint32_t r = 1; r <= n; ++r) {
    sum += static_cast<double>(profile.c_top[r]) * std::exp(t * static_cast<double>(profile.c[r]));
  }
  return sum;
}

double phi_degree_ceiling(std::uint32_t delta, std::uint32_t n) {
  if (delta <= 1) return 4.0 * n;
  const double d = delta;
  return 2.0 * d / (d * d - 1.0) * (std::pow(d, 2.0 * n) - 1.0);
}

std::vector<LevelTerm> phi_level_terms(const GrowthProfile& profile, std::uint32_t n) {
  if (n > profile.r_max) {
    throw std::invalid_argument("phi_level_terms: level exceeds the profile horizon");
  }
  std::vector<LevelTerm> rows;
  rows.reserve(n);
  for (std::uint32_t r = 1; r <= n; ++r) rows.push_back(level_term(profile, r, 1.0));
  return rows;
}

namespace {

// sum_{n>=0} c_{n+1} * slots_{n+1} * weight * tail(n): the phi-increment
// series. weight = p gives the subcriticality sum, weight = 1 the mean of
// phi(R). Level ceiling: 2 * delta^{2n+1} (4 when delta <= 1).
TailBoundSum phi_increment_sum(const GrowthProfile& g, const RadiusLaw& law, double weight,
                               const SeriesLimits& limits) {
  const double log_delta = clamped_log_delta(g.delta);
  const double log_level2 = g.delta <= 1 ? std::log(4.0) : std::log(2.0);
  const double log_weight = weight > 0.0 ? std::log(weight) : -std::numeric_limits<double>::infinity();
  return evaluate_tail_sum(
      g, law,
      [&](std::uint32_t n) { return level_term(g, n + 1, weight * law.tail(n)); },
      [&](std::uint32_t n) {
        const double lt = law.log_tail(n);
        if (!std::isfinite(lt) || !std::isfinite(log_weight)) return 0.0;
        return std::exp(log_level2 + (2.0 * n + 1.0) * log_delta + log_weight + lt);
      },
      limits);
}

}  // namespace

TailBoundSum mean_phi(const GrowthProfile& profile, const RadiusLaw& law,
                      const SeriesLimits& limits) {
  return phi_increment_sum(profile, law, 1.0, limits);
}

ExtendedReal pc_lower_bound(const GrowthProfile& profile, const RadiusLaw& law,
                            const SeriesLimits& limits) {
  TailBoundSum mean = mean_phi(profile, law, limits);
  ExtendedReal out;
  out.state = mean.sum.state;
  out.terms = mean.sum.terms;
  switch (mean.sum.state) {
    case SeriesState::Finite:
      out.value = 1.0 / mean.sum.value;
      out.note = "reciprocal of E[phi(R)]";
      break;
    case SeriesState::Infinite:
      out.value = 0.0;
      out.note = "E[phi(R)] diverges; bound degenerates to 0";
      break;
    case SeriesState::Inconclusive:
      out.value = 0.0;
      out.note = "E[phi(R)] not certified: " + mean.sum.note;
      break;
  }
  return out;
}

SubcriticalCheck check_subcritical(const GrowthProfile& profile, const RadiusLaw& law,
                                   double p, double margin, const SeriesLimits& limits) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("check_subcritical: p must lie in [0, 1]");
  }
  SubcriticalCheck out;
  out.p = p;
  out.margin = margin;
  out.sum = phi_increment_sum(profile, law, p, limits);
  out.holds = out.sum.sum.state == SeriesState::Finite && out.sum.sum.value < 1.0 - margin;
  return out;
}

ExpoCheck check_expo(const GrowthProfile& profile, const RadiusLaw& law,
                     double p, double t, const SeriesLimits& limits) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("check_expo: p must lie in [0, 1]");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("check_expo: t must be finite and nonnegative");
  }
  ExpoCheck out;
  out.p = p;
  out.t = t;
  const double log_delta = clamped_log_delta(profile.delta);
  const double delta_eff = profile.delta <= 1 ? 1.0 : static_cast<double>(profile.delta);
  const double log_p = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
  out.sum = evaluate_tail_sum(
      profile, law,
      [&](std::uint32_t n) {
        // Reuse the term layout: c holds c_top, slots the exponential weight.
        LevelTerm lt;
        lt.r = n + 1;
        lt.c = static_cast<double>(profile.c_top[n + 1]);
        lt.slots = std::exp(t * static_cast<double>(profile.c[n + 1]));
        lt.degree_branch = false;
        lt.term = lt.c * lt.slots * p * law.tail(n);
        return lt;
      },
      [&](std::uint32_t n) {
        const double lt = law.log_tail(n);
        if (!std::isfinite(lt) || !std::isfinite(log_p)) return 0.0;
        const double growth = 2.0 * std::pow(delta_eff, static_cast<double>(n));
        return std::exp(std::log(2.0) + n * log_delta + t * growth + log_p + lt);
      },
      limits);
  out.holds = out.sum.sum.state == SeriesState::Finite;
  return out;
}

ExtendedReal xi_mean(const GrowthProfile& profile, const RadiusLaw& law,
                     double p, const SeriesLimits& limits) {
  return check_subcritical(profile, law, p, 1e-9, limits).sum.sum;
}

ExtendedReal xi_log_mgf_bound(const GrowthProfile& profile, const RadiusLaw& law,
                              double p, double t, const SeriesLimits& limits) {
  ExtendedReal sum = check_expo(profile, law, p, t, limits).sum.sum;
  const double delta_eff = profile.delta <= 1 ? 1.0 : static_cast<double>(profile.delta);
  if (sum.state == SeriesState::Finite) {
    sum.value *= delta_eff;
    sum.note = "delta times the exponential-moment series";
  }
  return sum;
}

}  // namespace boolperc
