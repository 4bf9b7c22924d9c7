#include "boolperc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace boolperc {

namespace {

// Acklam's rational approximation to the standard normal quantile,
// refined with one Halley step against erfc. Accurate to ~1e-15 here.
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("inverse_normal_cdf: p must lie in (0, 1)");
  }
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement: e = CDF(x) - p.
  constexpr double kSqrt2Pi = 2.506628274631000502;
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * kSqrt2Pi * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

}  // namespace

double normal_quantile_two_sided(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("normal_quantile_two_sided: alpha must lie in (0, 1)");
  }
  return inverse_normal_cdf(1.0 - alpha / 2.0);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double alpha) {
  Interval iv;
  if (trials == 0) {
    iv.lo = 0.0;
    iv.hi = 1.0;
    iv.center = 0.5;
    return iv;
  }
  if (successes > trials) {
    throw std::invalid_argument("wilson_interval: successes exceed trials");
  }
  const double z = normal_quantile_two_sided(alpha);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  iv.center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  iv.lo = std::max(0.0, iv.center - half);
  iv.hi = std::min(1.0, iv.center + half);
  return iv;
}

double dkw_epsilon(std::uint64_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("dkw_epsilon: alpha must lie in (0, 1)");
  }
  if (n == 0) return 1.0;
  const double eps = std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
  return std::min(eps, 1.0);
}

KsResult ks_two_sample(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b,
                       double alpha) {
  KsResult res;
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("ks_two_sample: both samples must be nonempty");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double sup = 0.0;
  while (i < a.size() || j < b.size()) {
    std::uint64_t v;
    if (j >= b.size()) v = a[i];
    else if (i >= a.size()) v = b[j];
    else v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    const double fa = static_cast<double>(i) / na;
    const double fb = static_cast<double>(j) / nb;
    sup = std::max(sup, std::abs(fa - fb));
  }
  res.statistic = sup;
  const double c_alpha = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  res.threshold = c_alpha * std::sqrt((na + nb) / (na * nb));
  res.reject = res.statistic > res.threshold;
  return res;
}

LineFit weighted_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<double>& w) {
  if (x.size() != y.size() || x.size() != w.size()) {
    throw std::invalid_argument("weighted_least_squares: size mismatch");
  }
  LineFit fit;
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(w[k] > 0.0) || !std::isfinite(x[k]) || !std::isfinite(y[k]) || !std::isfinite(w[k])) {
      continue;
    }
    ++fit.points;
    sw += w[k];
    sx += w[k] * x[k];
    sy += w[k] * y[k];
    sxx += w[k] * x[k] * x[k];
    sxy += w[k] * x[k] * y[k];
  }
  const double det = sw * sxx - sx * sx;
  if (fit.points < 2 || !(det > 0.0)) return fit;
  fit.slope = (sw * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / sw;
  // Weights are inverse variances, so Var(slope) = SW / det.
  fit.slope_se = std::sqrt(sw / det);
  fit.ok = true;
  return fit;
}

double percentile(std::vector<double> sample, double q) {
  if (sample.empty()) {
    throw std::invalid_argument("percentile: empty sample");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("percentile: q must lie in [0, 1]");
  }
  std::sort(sample.begin(), sample.end());
  if (q <= 0.0) return sample.front();
  const auto n = static_cast<double>(sample.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  if (rank < 1) rank = 1;
  if (rank > sample.size()) rank = sample.size();
  return sample[rank - 1];
}

double mean_of(const std::vector<double>& sample) {
  if (sample.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double v : sample) s += v;
  return s / static_cast<double>(sample.size());
}

}  // namespace boolperc
