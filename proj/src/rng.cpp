#include "boolperc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace boolperc {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t (&c)[4], std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c[0] = hi1 ^ c[1] ^ k0;
  c[1] = lo1;
  c[2] = hi0 ^ c[3] ^ k1;
  c[3] = lo0;
}

}  // namespace

std::uint64_t philox_bits(std::uint64_t key, std::uint64_t stream, std::uint64_t counter) {
  std::uint32_t c[4] = {
      static_cast<std::uint32_t>(counter),
      static_cast<std::uint32_t>(counter >> 32),
      static_cast<std::uint32_t>(stream),
      static_cast<std::uint32_t>(stream >> 32),
  };
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    philox_round(c, k0, k1);
  }
  return static_cast<std::uint64_t>(c[0]) | (static_cast<std::uint64_t>(c[1]) << 32);
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint32_t poisson_from_uniform(double mean, double u) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("poisson_from_uniform: mean must be finite and nonnegative");
  }
  if (mean == 0.0) return 0;
  if (mean > 500.0) {
    throw std::invalid_argument("poisson_from_uniform: mean too large for CDF inversion");
  }
  double pmf = std::exp(-mean);
  double cdf = pmf;
  std::uint32_t k = 0;
  // u < cdf picks k; the loop terminates because cdf -> 1 and u < 1.
  while (u >= cdf) {
    ++k;
    pmf *= mean / static_cast<double>(k);
    cdf += pmf;
    if (k > 100000) break;  // cdf has numerically saturated; probability ~ 0
  }
  return k;
}

}  // namespace boolperc
