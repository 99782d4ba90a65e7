#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

// Deterministic random number generation for reproducible simulations.
//
// The core generator is xoshiro256++ (Blackman & Vigna 2019), state-filled
// from a splitmix64 sequence as its authors recommend. std::uniform_*
// distributions are implementation-defined and therefore avoided; all
// variates below are fixed bit-level constructions.
//
// Parallel work keys one substream per replicate index via mix_seed(seed,
// index), never per worker, so results are identical for any thread count.

namespace ovlq {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// splitmix64 output function (Steele, Lea & Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Seed of the substream for one replicate index.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + kGoldenGamma * (index + 1));
}

// Folds a path of identifiers (purpose tag, kernel, n, ...) into one seed.
// Used to keep e.g. null-table streams disjoint from trial streams.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> path) {
  for (std::uint64_t p : path) seed = mix_seed(seed, p);
  return seed;
}

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    // splitmix64 stream from `seed` fills the state; never all-zero.
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s += kGoldenGamma;
      word = mix64(s);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1): top 53 bits scaled by 2^-53.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double next_double_open0() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

// Standard normal draw by Box-Muller (cosine branch). Consumes exactly two
// uniforms, so the stream position depends only on the draw count.
inline double normal_standard(Xoshiro256pp& rng) {
  const double u1 = rng.next_double_open0();
  const double u2 = rng.next_double();
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace ovlq
