// Copyright 2026 The boxaug Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace boxaug {

/// Deterministic random stream identified by (seed, stream id).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Distributions are implemented here rather than taken from
/// <random>, whose distribution algorithms are implementation-defined.
/// Every raw draw is folded into `digest()` so callers can fingerprint the
/// exact sequence an operation consumed.
///
/// Not thread-safe; confine each stream to one worker.
class RandomSource {
 public:
  RandomSource(std::uint64_t seed, std::span<const std::uint64_t> path)
      : seed_(seed), stream_id_(hash_path(path)) {
    std::vector<std::uint32_t> words;
    words.reserve(3 + 2 * path.size());
    words.push_back(static_cast<std::uint32_t>(seed));
    words.push_back(static_cast<std::uint32_t>(seed >> 32));
    words.push_back(static_cast<std::uint32_t>(path.size()));
    for (const auto label : path) {
      words.push_back(static_cast<std::uint32_t>(label));
      words.push_back(static_cast<std::uint32_t>(label >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t digest() const noexcept { return digest_; }
  std::uint64_t draws() const noexcept { return draws_; }

  std::uint64_t next_u64() {
    const std::uint64_t v = engine_();
    digest_ = (digest_ ^ v) * kFnvPrime;
    ++draws_;
    return v;
  }

  /// Uniform integer in the closed range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next_u64());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t v = 0;
    do {
      v = next_u64();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % range);
  }

  /// Uniform real in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Box-Muller; one uniform pair per call, the second variate is discarded
  /// so that the draw count per call is fixed.
  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

  static std::uint64_t hash_path(std::span<const std::uint64_t> path) noexcept {
    std::uint64_t h = kFnvOffset;
    for (const auto label : path) {
      for (int i = 0; i < 8; ++i) {
        h = (h ^ ((label >> (8 * i)) & 0xffU)) * kFnvPrime;
      }
    }
    return h;
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t digest_ = kFnvOffset;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
};

inline RandomSource derive_stream(std::uint64_t seed, std::span<const std::uint64_t> labels) {
  return RandomSource(seed, labels);
}

inline RandomSource derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) {
  return RandomSource(seed, std::span<const std::uint64_t>(labels.begin(), labels.size()));
}

}  // namespace boxaug
