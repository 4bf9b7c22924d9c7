#pragma once

#include <cstdint>
#include <vector>

namespace boolperc {

// Two-sided confidence interval for a Bernoulli proportion.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double center = 0.0;

  bool contains(double x) const { return lo <= x && x <= hi; }
};

// Wilson score interval for successes/trials at confidence 1 - alpha.
// Well behaved at the extremes (0 or trials successes), unlike the normal
// approximation.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double alpha = 0.05);

// Dvoretzky-Kiefer-Wolfowitz band half-width: with probability >= 1 - alpha
// the empirical CDF of n samples stays within eps of the true CDF uniformly.
double dkw_epsilon(std::uint64_t n, double alpha = 0.05);

// Two-sided standard normal quantile helper (z for confidence 1 - alpha).
double normal_quantile_two_sided(double alpha);

// Two-sample Kolmogorov-Smirnov test on integer samples.
struct KsResult {
  double statistic = 0.0;   // sup |F1 - F2|
  double threshold = 0.0;   // rejection threshold at the given alpha
  bool reject = false;
};
KsResult ks_two_sample(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b,
                       double alpha = 0.01);

// Weighted least squares fit y ~ intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;    // standard error under the supplied weights
  std::uint32_t points = 0;
  bool ok = false;          // false when fewer than 2 usable points
};
LineFit weighted_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<double>& w);

// Percentile of a sample (q in [0,1], nearest-rank on the sorted copy).
double percentile(std::vector<double> sample, double q);

// Empirical mean.
double mean_of(const std::vector<double>& sample);

}  // namespace boolperc
