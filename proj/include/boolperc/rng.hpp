#pragma once

#include <array>
#include <cstdint>

// Counter-based random streams (Philox4x32-10 core).
//
// Every random quantity in the library is a pure function of
// (master seed, stream label path, counter). Streams are cheap value types;
// deriving a child stream never perturbs the parent. Draws addressed by
// counter are independent of traversal order, which is what makes samples
// reproducible under any scheduling and lets distinct windows share
// per-vertex randomness through stable vertex ids.

namespace boolperc {

// One Philox4x32-10 block. key = 64-bit, counter = 128-bit split as
// (ctr_lo, ctr_hi, stream_lo, stream_hi). Returns the first 64 output bits.
std::uint64_t philox_bits(std::uint64_t key, std::uint64_t stream, std::uint64_t counter);

// 64-bit finalizer used to derive stream labels.
std::uint64_t mix64(std::uint64_t z);

class RandomStream {
 public:
  RandomStream() = default;
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  // Child stream for a labeled purpose or an index (replicate, vertex, ...).
  RandomStream derive(std::uint64_t label) const {
    return RandomStream(seed_, mix64(stream_ ^ mix64(label + 0x9E3779B97F4A7C15ull)));
  }

  std::uint64_t bits_at(std::uint64_t counter) const {
    return philox_bits(seed_, stream_, counter);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform_at(std::uint64_t counter) const {
    return static_cast<double>(bits_at(counter) >> 11) * 0x1.0p-53;
  }

  // Sequential access for draws whose multiplicity is data dependent.
  double next_uniform() { return uniform_at(cursor_++); }
  std::uint64_t next_bits() { return bits_at(cursor_++); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t cursor_ = 0;
};

// Fixed labels for the independent sub-streams of one replicate.
// Kept in one place so no two call sites can collide.
namespace stream_label {
inline constexpr std::uint64_t activation = 1;    // per-vertex Bernoulli(p)
inline constexpr std::uint64_t radius = 2;        // per-vertex radius quantile
inline constexpr std::uint64_t levels = 3;        // Poisson field over (vertex, level)
inline constexpr std::uint64_t marks = 4;         // boundary marks, counter = packed key
inline constexpr std::uint64_t marks_direct = 5;  // balls with empty boundary + completion
inline constexpr std::uint64_t lift_marks = 6;    // intensity top-ups for boundary marks
inline constexpr std::uint64_t lift_first = 7;    // intensity top-ups for the root layer
inline constexpr std::uint64_t branching = 8;     // fresh offspring indicators
inline constexpr std::uint64_t resample = 9;      // bootstrap machinery
}  // namespace stream_label

// Inversion of the Poisson CDF from a single uniform. Exact for the small
// intensities used here (log-ratios of survival probabilities); guarded
// against pathological means.
std::uint32_t poisson_from_uniform(double mean, double u);

inline bool bernoulli_from_uniform(double prob, double u) { return u < prob; }

}  // namespace boolperc
