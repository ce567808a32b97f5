// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace pixelwpt {

/// Philox4x32-10 counter-based generator.
///
/// A (seed, stream) pair selects an independent sequence, reproducible on any
/// platform. Streams let concurrent consumers (one per Monte Carlo trial,
/// one per optimizer instance) draw without sharing state. Gaussian variates
/// use Box-Muller on the raw uniforms so sequences do not depend on the
/// standard library's distribution internals.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        stream_lo_(static_cast<std::uint32_t>(stream)),
        stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) {
      fill_block();
      pos_ = 0;
    }
    return out_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  /// Standard normal variate.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double z0 = 0.0;
    gaussian_pair(z0, spare_);
    have_spare_ = true;
    return z0;
  }

  /// Circularly symmetric complex Gaussian CN(0, 1).
  std::complex<double> complex_normal() {
    double z0 = 0.0;
    double z1 = 0.0;
    gaussian_pair(z0, z1);
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    return {z0 * kInvSqrt2, z1 * kInvSqrt2};
  }

 private:
  void gaussian_pair(double& z0, double& z1) {
    // u1 in (0, 1] keeps the log finite.
    const double u1 =
        static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    z0 = r * std::cos(t);
    z1 = r * std::sin(t);
  }

  void fill_block() {
    std::uint32_t c0 = static_cast<std::uint32_t>(block_);
    std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
    std::uint32_t c2 = stream_lo_;
    std::uint32_t c3 = stream_hi_;
    std::uint32_t k0 = key0_;
    std::uint32_t k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = 0xD2511F53ULL * c0;
      const std::uint64_t p1 = 0xCD9E8D57ULL * c2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n1 = lo1;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      const std::uint32_t n3 = lo0;
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += 0x9E3779B9U;
      k1 += 0xBB67AE85U;
    }
    out_[0] = c0;
    out_[1] = c1;
    out_[2] = c2;
    out_[3] = c3;
    ++block_;
  }

  std::uint32_t key0_;
  std::uint32_t key1_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint64_t block_ = 0;
  std::uint32_t out_[4] = {0, 0, 0, 0};
  int pos_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// SplitMix64-style derivation of sub-seeds, e.g. one per trial index.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream tags so independent consumers of one seed never collide.
inline constexpr std::uint64_t kStreamChannel = 1;
inline constexpr std::uint64_t kStreamSebo = 2;
inline constexpr std::uint64_t kStreamQuasiNewton = 3;
inline constexpr std::uint64_t kStreamAntenna = 4;
inline constexpr std::uint64_t kStreamCodebook = 5;
inline constexpr std::uint64_t kStreamStats = 6;

}  // namespace pixelwpt
