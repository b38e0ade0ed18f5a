// Copyright 2026 The dhsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace dhsp {

/// Seedable 64-bit stream.
///
/// Streams form a tree: child(id) derives a new stream from this stream's
/// seed (never from its position), so the same child id always yields the
/// same sequence no matter how much of the parent has been consumed.
/// Conventions used across the library:
///   oracle stream          Rng(seed).child(kOracleStream)
///   secret draw            Rng(seed).child(kSecretStream)
///   recovery level t       rng.child(t)
///   retry attempt a        level.child(a)
///   pipeline stage i       attempt.child(kStageStreamBase + i)
///
/// Draws avoid std:: distributions so sequences are identical across
/// standard library implementations.
class Rng {
 public:
  static constexpr std::uint64_t kOracleStream = 0x6f7261636c65ULL;
  static constexpr std::uint64_t kSecretStream = 0x736563726574ULL;
  static constexpr std::uint64_t kStageStreamBase = 0x7374616765000000ULL;

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }
  Rng child(std::uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + 1))); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 2^bits), bits in [0, 64].
  std::uint64_t bits(int bits) {
    if (bits <= 0) return 0;
    return next_u64() >> (64 - bits);
  }

  /// Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace dhsp
