#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

namespace kcomb {

// Identifies one random stream: a path (or named sub-stream) under a master
// seed. Every random draw in the toolkit descends from one of these.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Combines a parent key with a tag. Used to derive sub-streams
// (per-coordinate walks, per-level geometric sequences, grid points).
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t tag) noexcept {
  return mix64(mix64(parent) ^ (tag * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
}

// Named sub-stream tags. Level j of a coupled walk uses kGeometricBase + j.
namespace substream {
inline constexpr std::uint64_t kDirect = 1;
inline constexpr std::uint64_t kHorizontal = 2;  // S1
inline constexpr std::uint64_t kVertical = 3;    // S2
inline constexpr std::uint64_t kGeometricBase = 16;
}  // namespace substream

// xoshiro256** seeded from a SplitMix64 sequence. The derivation
//   key = derive_key(derive_key(master_seed, stream_index), substream)
// is fixed, so streams depend only on the seed triple and never on the
// machine or the number of worker threads.
class Rng {
 public:
  explicit Rng(std::uint64_t key) noexcept {
    std::uint64_t s = key;
    for (auto& w : state_) {
      s += 0x9E3779B97F4A7C15ULL;
      w = mix64(s);
    }
  }

  Rng(const SeedSpec& seed, std::uint64_t sub) noexcept
      : Rng(derive_key(derive_key(seed.master_seed, seed.stream_index), sub)) {}

  std::uint64_t next() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_pos() noexcept {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal by Box-Muller (cosine branch only, one variate per call).
  // Written out rather than using std::normal_distribution, whose output is
  // implementation defined.
  double normal() noexcept {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    return r * std::cos(kTwoPi * uniform());
  }

 private:
  std::uint64_t state_[4];
};

// A simple symmetric walk driven bit by bit: bit i (LSB first) of the i-th
// word decides step i, 1 meaning +1. Any split of a stretch of steps into
// chunks consumes the same bits, so chunked and step-by-step evaluation give
// identical paths.
class BitWalk {
 public:
  explicit BitWalk(Rng rng) noexcept : rng_(rng) {}

  int step() noexcept {
    if (left_ == 0) refill();
    const int s = static_cast<int>(word_ & 1U) * 2 - 1;
    word_ >>= 1;
    --left_;
    return s;
  }

  // Bits remaining in the current word (refilling first if empty).
  int available() noexcept {
    if (left_ == 0) refill();
    return left_;
  }

  // Advances k steps, 1 <= k <= available(). Returns the displacement.
  std::int64_t advance(int k) noexcept {
    const std::uint64_t mask = k == 64 ? ~0ULL : ((1ULL << k) - 1);
    const int ups = std::popcount(word_ & mask);
    word_ = k == 64 ? 0 : word_ >> k;
    left_ -= k;
    return 2 * ups - k;
  }

  // Advances any number of steps.
  std::int64_t advance_many(std::int64_t n) noexcept {
    std::int64_t d = 0;
    while (n > 0) {
      const int k = static_cast<int>(std::min<std::int64_t>(n, available()));
      d += advance(k);
      n -= k;
    }
    return d;
  }

 private:
  void refill() noexcept {
    word_ = rng_.next();
    left_ = 64;
  }

  Rng rng_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

}  // namespace kcomb
