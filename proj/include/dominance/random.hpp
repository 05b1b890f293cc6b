// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "dominance/errors.hpp"

namespace dominance {

namespace detail {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// xoshiro256** (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256StarStar(std::uint64_t key) noexcept {
    std::uint64_t z = key;
    for (auto& word : state_) {
      z += 0x9e3779b97f4a7c15ULL;
      word = detail::mix64(z);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl(state_[3], 45);
    return result;
  }

  friend constexpr bool operator==(const Xoshiro256StarStar&, const Xoshiro256StarStar&) = default;

 private:
  std::array<std::uint64_t, 4> state_{};
};

// A random stream addressed by (seed, stream). The generator state is
// derived only from the address, so a stream draws the same sequence no
// matter which thread consumes it. Streams are values: copying one forks an
// identical sequence, and a single stream must not be shared across threads.
class RngStream {
 public:
  constexpr RngStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : seed_(seed), stream_(stream), engine_(key(seed, stream)) {}

  constexpr std::uint64_t seed() const noexcept { return seed_; }
  constexpr std::uint64_t stream() const noexcept { return stream_; }

  // Fresh stream for sub-task `index` (a bootstrap replicate, a simulation
  // replication). Nested derivations never collide with the parent.
  constexpr RngStream child(std::uint64_t index) const noexcept {
    return RngStream(seed_, detail::mix64(stream_ ^ detail::mix64(index + 0x5851f42d4c957f2dULL)));
  }

  constexpr std::uint64_t next_u64() noexcept { return engine_(); }

  // Uniform on the open interval (0,1), 53-bit resolution.
  constexpr double uniform() noexcept {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) by Lemire's multiply-and-reject.
  std::uint64_t below(std::uint64_t bound) noexcept {
    std::uint64_t x = engine_();
    __uint128_t product = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = engine_();
        product = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  // Standard normal draw by Marsaglia's polar method; the second variate of
  // each accepted pair is kept for the next call.
  double standard_normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

  using result_type = std::uint64_t;
  static constexpr result_type min() noexcept { return Xoshiro256StarStar::min(); }
  static constexpr result_type max() noexcept { return Xoshiro256StarStar::max(); }
  constexpr result_type operator()() noexcept { return engine_(); }

 private:
  static constexpr std::uint64_t key(std::uint64_t seed, std::uint64_t stream) noexcept {
    return detail::mix64(detail::mix64(seed) ^ detail::rotl(stream, 32) ^ 0xd1b54a32d192ed03ULL);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  Xoshiro256StarStar engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Fills `out` with N(mu, sigma^2) draws: mu + sigma * z for successive
// standard normal draws z of the stream.
inline void fill_normal(RngStream& rng, double mu, double sigma, std::span<double> out) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("normal sampling requires a positive finite sigma");
  }
  for (double& value : out) value = mu + sigma * rng.standard_normal();
}

inline std::vector<double> sample_normal(RngStream& rng, double mu, double sigma, std::size_t n) {
  if (n == 0) throw InputError("sample_normal: n must be at least 1");
  std::vector<double> out(n);
  fill_normal(rng, mu, sigma, out);
  return out;
}

}  // namespace dominance
