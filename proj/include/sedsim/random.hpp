#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <utility>

namespace sedsim {

// SplitMix64 finalizer. Used both as the stream generator below and as the
// seed-splitting hash, so that trial i of a run always sees the same stream
// no matter which worker executes it.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for sub-stream (master, i0, i1, ...): each index is folded in with a
// golden-ratio increment followed by a full mix.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> indices) noexcept {
  std::uint64_t s = mix64(master + 0x9e3779b97f4a7c15ULL);
  for (std::uint64_t i : indices) {
    s = mix64(s ^ mix64(i + 0x9e3779b97f4a7c15ULL));
  }
  return s;
}

// Small counter-based generator satisfying UniformRandomBitGenerator. One
// instance per trial; never shared between threads.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

// Uniform double in [0, 1) from the top 53 bits. Spelled out rather than using
// std::uniform_real_distribution, whose output is implementation-defined.
constexpr double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(SplitMix64& gen) noexcept { return to_unit_interval(gen()); }

// Two independent standard normals (Box-Muller).
std::pair<double, double> standard_normal_pair(SplitMix64& gen);

}  // namespace sedsim
