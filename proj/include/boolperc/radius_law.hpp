#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "boolperc/series.hpp"

// Radius laws on the positive integers, optionally conditioned on a finite
// cap, together with the survival-probability ladder the point-process
// construction runs on:
//
//   tail(n)           P(R > n)
//   q(p, n)           1 - p * tail(n), the chance a vertex is dry beyond n
//   lambda(p, n)      log(q_n / q_{n-1}), the level-n Poisson intensity
//   tail_intensity(p, r)  sum of lambda over levels >= r, equal to -log q_{r-1}
//
// Capping means conditioning on {R <= cap} and renormalizing; the mass that
// conditioning removed stays available for reporting.

namespace boolperc {

class RadiusLaw {
 public:
  enum class Kind { Deterministic, Geometric, Zeta, Table };

  static RadiusLaw deterministic(std::uint32_t value);
  /// Tail-ratio parametrization: P(R > n) = a^n, so E[R] = 1/(1-a).
  static RadiusLaw geometric(double a);
  /// P(R = k) proportional to k^(-s), s > 1.
  static RadiusLaw zeta(double s);
  /// Explicit pmf on {1, ..., len}; must sum to 1 within 1e-9.
  static RadiusLaw table(std::vector<double> pmf);

  /// Condition on {R <= cap}. Throws if the base law puts no mass there.
  RadiusLaw capped(std::uint32_t cap) const;

  Kind kind() const { return kind_; }
  bool has_cap() const { return cap_ > 0; }
  /// 0 when uncapped.
  std::uint32_t cap() const { return cap_; }
  /// Mass P(R > cap) the conditioning removed from the base law.
  double truncation_mass() const { return truncation_mass_; }

  double tail(std::uint32_t n) const;
  /// log P(R > n); -infinity where the tail vanishes. Computed in log space
  /// for uncapped geometric laws so deep tails stay exact past underflow.
  double log_tail(std::uint32_t n) const;
  double pmf(std::uint32_t k) const;
  double mean() const;

  double q(double p, std::uint32_t n) const;
  /// n >= 1; requires p < 1 so that q_0 > 0.
  double lambda(double p, std::uint32_t n) const;
  /// r >= 1; sum of lambda(p, n) over n >= r.
  double tail_intensity(double p, std::uint32_t r) const;

  /// Quantile: the radius whose CDF first reaches past u in [0, 1).
  std::uint32_t sample(double u) const;

  /// E[f(R)] summed directly against the pmf. Uncapped laws use the series
  /// detectors and accept only monotone f.
  ExtendedReal expect_f(const std::function<double(std::uint32_t)>& f,
                        const SeriesLimits& limits = {}) const;

  /// Same expectation through the survival ladder:
  /// f(0) + (1/p) * sum_n (f(n+1) - f(n)) * (1 - q_n).
  ExtendedReal expect_f_telescoping(double p, const std::function<double(std::uint32_t)>& f,
                                    const SeriesLimits& limits = {}) const;

 private:
  RadiusLaw() = default;
  double base_tail(std::uint32_t n) const;
  void check_p(double p) const;

  Kind kind_ = Kind::Deterministic;
  std::uint32_t value_ = 1;       // deterministic point
  double a_ = 0.5;                // geometric tail ratio
  double s_ = 2.0;                // zeta exponent
  double zeta_norm_ = 0.0;        // zeta(s)
  std::vector<double> table_;     // explicit pmf, 1-based semantics
  std::uint32_t cap_ = 0;
  double keep_mass_ = 1.0;        // P_base(R <= cap), 1 when uncapped
  double truncation_mass_ = 0.0;
};

}  // namespace boolperc
