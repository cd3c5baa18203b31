#pragma once

// Counter-based random number generation.
//
// Generator: Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy
// as 1, 2, 3"), stream layout version 1:
//
//   key     = 64-bit seed split into two 32-bit words (low word first)
//   counter = (block_lo, block_hi, stream_lo, stream_hi)
//
// Each (seed, stream) pair is an independent sequence of 2^64 blocks of 128
// bits. Child seeds for independent purposes are obtained with derive_seed(),
// which hashes the parent seed together with a list of integer coordinates,
// so the result never depends on the order in which work is scheduled.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace ripc {

inline constexpr std::string_view kRngName = "philox4x32-10/v1";

class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept;

  /// Raw ten-round bijection; exposed for known-answer tests.
  static Block bijection(Block counter, Key key) noexcept;

  result_type operator()() noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  /// Skip n 64-bit outputs.
  void discard(std::uint64_t n) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int used_ = 4;  // in 32-bit words; 4 means empty
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Order-sensitive hash of a parent seed and a coordinate list.
constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                    std::initializer_list<std::uint64_t> coords) noexcept {
  std::uint64_t h = mix64(parent ^ 0x5EED5EED5EED5EEDULL);
  for (std::uint64_t c : coords) h = mix64(h ^ mix64(c + 0x632BE59BD9B4E019ULL));
  return h;
}

/// Stable 64-bit tag for a purpose name, for use as a derive_seed coordinate.
constexpr std::uint64_t purpose_tag(std::string_view name) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Philox4x32& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi].
inline double uniform(Philox4x32& rng, double lo, double hi) noexcept {
  return lo + (hi - lo) * uniform01(rng);
}

// Boost.Random distributions are used for non-uniform deviates: unlike the
// std:: ones their algorithms are fixed, so streams agree across toolchains.

double standard_normal(Philox4x32& rng);

double chi_squared(Philox4x32& rng, double dof);

}  // namespace ripc
