#include <doctest.h>

#include <cmath>
#include <vector>

#include "boolperc/stats.hpp"

using namespace boolperc;

TEST_CASE("wilson interval reference values") {
  Interval i = wilson_interval(50, 100, 0.05);
  CHECK(i.lo == doctest::Approx(0.40383).epsilon(2e-3));
  CHECK(i.hi == doctest::Approx(0.59617).epsilon(2e-3));
  CHECK(i.contains(0.5));

  Interval zero = wilson_interval(0, 100, 0.05);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi > 0.0);
  CHECK(zero.hi < 0.05);

  Interval all = wilson_interval(100, 100, 0.05);
  CHECK(all.hi == 1.0);
  CHECK(all.lo > 0.95);
}

TEST_CASE("dkw epsilon formula and clamp") {
  CHECK(dkw_epsilon(100000, 0.01) ==
        doctest::Approx(std::sqrt(std::log(2.0 / 0.01) / (2.0 * 100000))).epsilon(1e-12));
  CHECK(dkw_epsilon(1, 0.001) == 1.0);
}

TEST_CASE("normal quantiles") {
  CHECK(normal_quantile_two_sided(0.05) == doctest::Approx(1.9599640).epsilon(1e-6));
  CHECK(normal_quantile_two_sided(0.01) == doctest::Approx(2.5758293).epsilon(1e-6));
}

TEST_CASE("ks two-sample: identical and shifted samples") {
  std::vector<std::uint64_t> a, b;
  for (std::uint64_t i = 0; i < 1000; ++i) a.push_back(i);
  KsResult same = ks_two_sample(a, a, 0.01);
  CHECK(same.statistic == 0.0);
  CHECK_FALSE(same.reject);

  for (std::uint64_t i = 0; i < 1000; ++i) b.push_back(i + 500);
  KsResult shifted = ks_two_sample(a, b, 0.01);
  CHECK(shifted.statistic == doctest::Approx(0.5));
  CHECK(shifted.reject);
  double expect_threshold =
      std::sqrt(-std::log(0.01 / 2.0) / 2.0) * std::sqrt(2000.0 / (1000.0 * 1000.0));
  CHECK(shifted.threshold == doctest::Approx(expect_threshold).epsilon(1e-9));
}

TEST_CASE("weighted least squares recovers an exact line") {
  std::vector<double> x{0, 1, 2, 3, 4};
  std::vector<double> y, w{1, 2, 3, 1, 5};
  for (double xi : x) y.push_back(2.0 - 3.0 * xi);
  LineFit fit = weighted_least_squares(x, y, w);
  REQUIRE(fit.ok);
  CHECK(fit.slope == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.points == 5);

  LineFit degenerate = weighted_least_squares({1.0}, {1.0}, {1.0});
  CHECK_FALSE(degenerate.ok);
}

TEST_CASE("nearest-rank percentile") {
  std::vector<double> s{4, 1, 3, 2};
  CHECK(percentile(s, 0.0) == 1.0);
  CHECK(percentile(s, 0.5) == 2.0);
  CHECK(percentile(s, 0.75) == 3.0);
  CHECK(percentile(s, 1.0) == 4.0);
  CHECK(mean_of(s) == doctest::Approx(2.5));
}
