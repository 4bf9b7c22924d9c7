#include "boolperc/radius_law.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace boolperc {

namespace {

constexpr std::uint32_t kZetaCache = 1u << 16;

// zeta partial sums are smooth enough for Euler-Maclaurin once k is past the
// cache: sum_{k > n} k^-s = (n+1)^(1-s)/(s-1) + (n+1)^-s/2 + s*(n+1)^-(s+1)/12.
double zeta_tail_sum(double s, std::uint64_t n) {
  const double a = static_cast<double>(n) + 1.0;
  return std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s) +
         s / 12.0 * std::pow(a, -s - 1.0);
}

}  // namespace

RadiusLaw RadiusLaw::deterministic(std::uint32_t value) {
  if (value < 1) throw std::invalid_argument("deterministic law needs a value >= 1");
  RadiusLaw law;
  law.kind_ = Kind::Deterministic;
  law.value_ = value;
  // Bounded support, so the law counts as capped out of the box. No mass is
  // removed, hence keep_mass stays 1.
  law.cap_ = value;
  return law;
}

RadiusLaw RadiusLaw::geometric(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw std::invalid_argument("geometric law needs tail ratio a in (0, 1)");
  }
  RadiusLaw law;
  law.kind_ = Kind::Geometric;
  law.a_ = a;
  return law;
}

RadiusLaw RadiusLaw::zeta(double s) {
  if (!(s > 1.0)) throw std::invalid_argument("zeta law needs exponent s > 1");
  RadiusLaw law;
  law.kind_ = Kind::Zeta;
  law.s_ = s;
  double sum = 0.0;
  for (std::uint32_t k = 1; k <= kZetaCache; ++k) sum += std::pow(k, -s);
  law.zeta_norm_ = sum + zeta_tail_sum(s, kZetaCache);
  return law;
}

RadiusLaw RadiusLaw::table(std::vector<double> pmf) {
  if (pmf.empty()) throw std::invalid_argument("table law needs a nonempty pmf");
  double sum = 0.0;
  for (double w : pmf) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("table law entries must be finite and nonnegative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("table law pmf must sum to 1 (within 1e-9)");
  }
  for (double& w : pmf) w /= sum;
  RadiusLaw law;
  law.kind_ = Kind::Table;
  law.table_ = std::move(pmf);
  return law;
}

RadiusLaw RadiusLaw::capped(std::uint32_t cap) const {
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  RadiusLaw law = *this;
  law.cap_ = cap;
  const double drop = law.base_tail(cap);
  law.keep_mass_ = 1.0 - drop;
  law.truncation_mass_ = drop;
  if (!(law.keep_mass_ > 0.0)) {
    throw std::invalid_argument("cap removes all mass from the law");
  }
  return law;
}

double RadiusLaw::base_tail(std::uint32_t n) const {
  switch (kind_) {
    case Kind::Deterministic:
      return n < value_ ? 1.0 : 0.0;
    case Kind::Geometric:
      return std::pow(a_, static_cast<double>(n));
    case Kind::Zeta: {
      if (n == 0) return 1.0;
      if (n >= kZetaCache) return zeta_tail_sum(s_, n) / zeta_norm_;
      double head = 0.0;
      for (std::uint32_t k = 1; k <= n; ++k) head += std::pow(k, -s_);
      return 1.0 - head / zeta_norm_;
    }
    case Kind::Table: {
      if (n >= table_.size()) return 0.0;
      double t = 0.0;
      for (std::size_t k = n; k < table_.size(); ++k) t += table_[k];
      return t;
    }
  }
  return 0.0;
}

double RadiusLaw::tail(std::uint32_t n) const {
  if (!has_cap()) return base_tail(n);
  if (n >= cap_) return 0.0;
  return (base_tail(n) - truncation_mass_) / keep_mass_;
}

double RadiusLaw::log_tail(std::uint32_t n) const {
  if (!has_cap() && kind_ == Kind::Geometric) {
    return static_cast<double>(n) * std::log(a_);
  }
  double t = tail(n);
  return t > 0.0 ? std::log(t) : -std::numeric_limits<double>::infinity();
}

double RadiusLaw::pmf(std::uint32_t k) const {
  if (k < 1) return 0.0;
  if (has_cap() && k > cap_) return 0.0;
  double base;
  switch (kind_) {
    case Kind::Deterministic: base = (k == value_) ? 1.0 : 0.0; break;
    case Kind::Geometric: base = (1.0 - a_) * std::pow(a_, static_cast<double>(k - 1)); break;
    case Kind::Zeta: base = std::pow(k, -s_) / zeta_norm_; break;
    case Kind::Table: base = (k <= table_.size()) ? table_[k - 1] : 0.0; break;
    default: base = 0.0;
  }
  return has_cap() ? base / keep_mass_ : base;
}

double RadiusLaw::mean() const {
  if (has_cap()) {
    double m = 0.0;
    for (std::uint32_t k = 1; k <= cap_; ++k) m += k * pmf(k);
    return m;
  }
  switch (kind_) {
    case Kind::Deterministic: return value_;
    case Kind::Geometric: return 1.0 / (1.0 - a_);
    case Kind::Zeta:
      if (s_ <= 2.0) return std::numeric_limits<double>::infinity();
      {
        // E[R] = zeta(s-1)/zeta(s)
        double num = 0.0;
        for (std::uint32_t k = 1; k <= kZetaCache; ++k) num += std::pow(k, 1.0 - s_);
        num += zeta_tail_sum(s_ - 1.0, kZetaCache);
        return num / zeta_norm_;
      }
    case Kind::Table: {
      double m = 0.0;
      for (std::size_t k = 1; k <= table_.size(); ++k) m += k * table_[k - 1];
      return m;
    }
  }
  return 0.0;
}

double RadiusLaw::q(double p, std::uint32_t n) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("q: p must lie in [0, 1]");
  return 1.0 - p * tail(n);
}

void RadiusLaw::check_p(double p) const {
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::invalid_argument("survival intensities need p in [0, 1)");
  }
}

double RadiusLaw::lambda(double p, std::uint32_t n) const {
  check_p(p);
  if (n < 1) throw std::invalid_argument("lambda: level must be >= 1");
  // log(q_n) - log(q_{n-1}), kept in log1p form for small p * tail.
  return std::log1p(-p * tail(n)) - std::log1p(-p * tail(n - 1));
}

double RadiusLaw::tail_intensity(double p, std::uint32_t r) const {
  check_p(p);
  if (r < 1) throw std::invalid_argument("tail_intensity: radius must be >= 1");
  return -std::log1p(-p * tail(r - 1));
}

std::uint32_t RadiusLaw::sample(double u) const {
  if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("sample: u must lie in [0, 1)");
  // Invert the base CDF at t = u * keep_mass, which is exactly the quantile
  // of the conditioned law.
  const double t = has_cap() ? u * keep_mass_ : u;
  std::uint32_t r;
  switch (kind_) {
    case Kind::Deterministic:
      r = value_;
      break;
    case Kind::Geometric: {
      // CDF(k) = 1 - a^k > t  <=>  k > log(1-t)/log(a)
      const double x = std::log1p(-t) / std::log(a_);
      double k = std::floor(x) + 1.0;
      if (k < 1.0) k = 1.0;
      if (k > 2147483647.0) k = 2147483647.0;
      r = static_cast<std::uint32_t>(k);
      // Guard the floor against roundoff on exact lattice points: settle on
      // the smallest r with CDF(r) > t.
      while (r > 1 && 1.0 - base_tail(r - 1) > t) --r;
      while (1.0 - base_tail(r) <= t) ++r;
      break;
    }
    case Kind::Zeta: {
      double cdf = 0.0;
      r = 0;
      while (r < kZetaCache) {
        ++r;
        cdf += std::pow(r, -s_) / zeta_norm_;
        if (cdf > t) break;
      }
      if (cdf <= t) {
        // Binary search on the smooth tail beyond the cache.
        std::uint64_t lo = kZetaCache, hi = std::uint64_t(1) << 40;
        while (lo + 1 < hi) {
          const std::uint64_t mid = lo + (hi - lo) / 2;
          if (1.0 - zeta_tail_sum(s_, mid) / zeta_norm_ > t) hi = mid;
          else lo = mid;
        }
        r = static_cast<std::uint32_t>(std::min<std::uint64_t>(hi, 2147483647ull));
      }
      break;
    }
    case Kind::Table: {
      double cdf = 0.0;
      r = static_cast<std::uint32_t>(table_.size());
      for (std::size_t k = 0; k < table_.size(); ++k) {
        cdf += table_[k];
        if (cdf > t) {
          r = static_cast<std::uint32_t>(k + 1);
          break;
        }
      }
      break;
    }
    default:
      r = 1;
  }
  if (has_cap() && r > cap_) r = cap_;
  return r;
}

ExtendedReal RadiusLaw::expect_f(const std::function<double(std::uint32_t)>& f,
                                 const SeriesLimits& limits) const {
  std::uint32_t support_end = 0;  // 0 = unbounded
  if (has_cap()) support_end = cap_;
  else if (kind_ == Kind::Deterministic) support_end = value_;
  else if (kind_ == Kind::Table) support_end = static_cast<std::uint32_t>(table_.size());

  if (support_end > 0) {
    double sum = 0.0;
    for (std::uint32_t k = 1; k <= support_end; ++k) sum += f(k) * pmf(k);
    return {SeriesState::Finite, sum, support_end, "finite support"};
  }

  // Unbounded support: demand monotone f so that settling is meaningful.
  int direction = 0;
  double prev_f = f(1);
  auto term = [&](std::uint64_t n) {
    const std::uint32_t k = static_cast<std::uint32_t>(n + 1);
    const double fk = f(k);
    if (k > 1) {
      const int step = fk > prev_f ? 1 : (fk < prev_f ? -1 : 0);
      if (step != 0 && direction != 0 && step != direction) {
        throw std::invalid_argument("expect_f: f must be monotone for uncapped laws");
      }
      if (step != 0) direction = step;
      prev_f = fk;
    }
    return fk * pmf(k);
  };
  return sum_series(term, limits);
}

ExtendedReal RadiusLaw::expect_f_telescoping(double p,
                                             const std::function<double(std::uint32_t)>& f,
                                             const SeriesLimits& limits) const {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("expect_f_telescoping: p must lie in (0, 1]");
  }
  std::uint32_t support_end = 0;
  if (has_cap()) support_end = cap_;
  else if (kind_ == Kind::Deterministic) support_end = value_;
  else if (kind_ == Kind::Table) support_end = static_cast<std::uint32_t>(table_.size());

  if (support_end > 0) {
    double sum = 0.0;
    for (std::uint32_t n = 0; n < support_end; ++n) {
      sum += (f(n + 1) - f(n)) * (1.0 - q(p, n));
    }
    return {SeriesState::Finite, f(0) + sum / p, support_end, "finite support"};
  }

  // Increments of a monotone f are single signed; reject mixtures and fold
  // the common sign out so the divergence detectors see nonnegative terms.
  int direction = 0;
  auto term = [&](std::uint64_t n32) {
    const std::uint32_t n = static_cast<std::uint32_t>(n32);
    const double diff = f(n + 1) - f(n);
    const int step = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
    if (step != 0 && direction != 0 && step != direction) {
      throw std::invalid_argument("expect_f_telescoping: f must be monotone for uncapped laws");
    }
    if (step != 0) direction = step;
    return std::abs(diff) * (1.0 - q(p, n));
  };
  ExtendedReal series = sum_series(term, limits);
  if (series.state == SeriesState::Finite) {
    const double sign = direction < 0 ? -1.0 : 1.0;
    series.value = f(0) + sign * series.value / p;
  }
  return series;
}

}  // namespace boolperc
