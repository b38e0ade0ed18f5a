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
#include <span>
#include <vector>

#include "dhsp/core.hpp"
#include "dhsp/rng.hpp"

namespace dhsp {

inline constexpr int kMaxBatch = 24;

/// A subset b of {1..L} as a bitmask. b_1 is the most significant of the L
/// bits, so ascending numeric order is lexicographic order on (b_1,...,b_L).
using Bitstring = std::uint32_t;

/// b_j (1-indexed) of a bitstring of length `len`.
inline int bit_at(Bitstring b, int j, int len) { return static_cast<int>((b >> (len - j)) & 1U); }

/// Block combine over the l-bit block starting at bit `offset`.
///
/// The uniform pipeline uses offset = (i-1)*l for block i; other schedules
/// pass any offset. batch_size() objects go in per attempt.
struct BlockCombineConfig {
  int l = 1;
  int offset = 0;
  std::uint64_t m_min = 2;
  std::uint64_t m_max = 32;

  static BlockCombineConfig for_block(int l, int block_index);

  int batch_size() const { return l + 4; }
  /// Exponent of the measured register: offset + l.
  int modulus_exponent() const { return offset + l; }
  void validate(int n) const;
};

/// All b in {0,1}^{L} with <b, y> = z (mod 2^t), in lexicographic order.
struct SolutionSet {
  std::uint64_t z = 0;
  std::vector<Bitstring> solutions;

  std::uint64_t m() const { return solutions.size(); }
};

/// <b, y> mod 2^t for every b, indexed by the Bitstring encoding.
std::vector<std::uint64_t> subset_sums(std::span<const std::uint64_t> y, int t);

/// Exhaustive enumeration of the solutions of <b, y> = z (mod 2^t).
SolutionSet count_solutions(std::span<const std::uint64_t> y, std::uint64_t z, int t);

/// m(z) for every z in [0, 2^t); sums to 2^{|y|}.
std::vector<std::uint64_t> solution_counts(std::span<const std::uint64_t> y, int t);

/// Born-rule distribution of the measured register: P(z) = m(z) / 2^{|y|}.
std::vector<double> z_distribution(std::span<const std::uint64_t> y, int t);

/// Probability the 2-of-m projection keeps its two terms.
inline double projection_success_probability(std::uint64_t m) {
  return m < 2 ? 0.0 : 2.0 / static_cast<double>(m);
}

/// Parity-measurement combine. Consumes both objects. On odd parity
/// (probability 1/2) returns the object labelled y2 - y1 mod N.
CombineOutcome combine_pair(PhaseObject o1, PhaseObject o2, Rng& rng);

/// Projects the m-term state onto its two lexicographically smallest
/// solutions. `labels` are the batch labels the solutions index into.
CombineOutcome project_first_two(const SolutionSet& set, std::span<const std::uint64_t> labels,
                                 int n, const BlockCombineConfig& cfg, Rng& rng);

/// l+4-object block combine. Consumes every object in `objs`.
CombineOutcome combine_block(std::vector<PhaseObject> objs, const BlockCombineConfig& cfg,
                             Rng& rng);

struct YStatistics {
  double mean;
  double variance;  // unbiased sample variance
};

/// Y = m(0) - 1 for uniform y in (Z_{2^l})^{l+4}, over `trials` draws.
YStatistics y_statistics(int l, std::uint64_t trials, Rng& rng);

/// 16 - 2^{-l}.
double y_expected_mean(int l);
/// 16 - 17 * 2^{-l} + 2^{-2l}.
double y_expected_variance(int l);

}  // namespace dhsp
