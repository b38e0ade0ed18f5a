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

#include "dhsp/combine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace dhsp {
namespace {

std::uint64_t low_mask(int t) {
  return t >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << t) - 1;
}

void check_batch_length(std::size_t len) {
  if (len == 0 || len > kMaxBatch) {
    throw ParameterError("batch of " + std::to_string(len) + " labels outside [1, " +
                         std::to_string(kMaxBatch) + "]");
  }
}

// <b, y> mod 2^t for a single bitstring.
std::uint64_t inner_product(Bitstring b, std::span<const std::uint64_t> y, int t) {
  const int len = static_cast<int>(y.size());
  std::uint64_t s = 0;
  for (int j = 1; j <= len; ++j) {
    if (bit_at(b, j, len)) s += y[j - 1];
  }
  return s & low_mask(t);
}

}  // namespace

BlockCombineConfig BlockCombineConfig::for_block(int l, int block_index) {
  if (l < 1 || block_index < 1) throw ParameterError("block combine needs l >= 1 and i >= 1");
  BlockCombineConfig cfg;
  cfg.l = l;
  cfg.offset = (block_index - 1) * l;
  return cfg;
}

void BlockCombineConfig::validate(int n) const {
  if (l < 1 || offset < 0) throw ParameterError("block combine needs l >= 1 and offset >= 0");
  if (modulus_exponent() > n) {
    throw ParameterError("block [" + std::to_string(offset) + ", " +
                         std::to_string(modulus_exponent()) + ") exceeds n=" + std::to_string(n));
  }
  if (batch_size() > kMaxBatch) throw ParameterError("block width too large to enumerate");
  if (m_min > m_max) throw ParameterError("m_min exceeds m_max");
}

std::vector<std::uint64_t> subset_sums(std::span<const std::uint64_t> y, int t) {
  check_batch_length(y.size());
  const int len = static_cast<int>(y.size());
  const std::uint64_t mask = low_mask(t);
  std::vector<std::uint64_t> sums(std::size_t{1} << len);
  sums[0] = 0;
  for (std::size_t b = 1; b < sums.size(); ++b) {
    // Bit p of the mask holds b_{len - p}.
    const int p = std::countr_zero(b);
    sums[b] = (sums[b & (b - 1)] + y[len - 1 - p]) & mask;
  }
  return sums;
}

SolutionSet count_solutions(std::span<const std::uint64_t> y, std::uint64_t z, int t) {
  const auto sums = subset_sums(y, t);
  SolutionSet set;
  set.z = z;
  for (std::size_t b = 0; b < sums.size(); ++b) {
    if (sums[b] == z) set.solutions.push_back(static_cast<Bitstring>(b));
  }
  return set;
}

std::vector<std::uint64_t> solution_counts(std::span<const std::uint64_t> y, int t) {
  if (t < 0 || t > 30) throw ParameterError("solution_counts: t outside [0, 30]");
  std::vector<std::uint64_t> counts(std::size_t{1} << t, 0);
  for (std::uint64_t s : subset_sums(y, t)) ++counts[s];
  return counts;
}

std::vector<double> z_distribution(std::span<const std::uint64_t> y, int t) {
  const auto counts = solution_counts(y, t);
  const double total = std::ldexp(1.0, static_cast<int>(y.size()));
  std::vector<double> p(counts.size());
  std::transform(counts.begin(), counts.end(), p.begin(),
                 [total](std::uint64_t c) { return static_cast<double>(c) / total; });
  return p;
}

CombineOutcome combine_pair(PhaseObject o1, PhaseObject o2, Rng& rng) {
  require_live(o1, "combine_pair");
  require_live(o2, "combine_pair");
  if (o1.label().n() != o2.label().n()) {
    throw ParameterError("combine_pair: mismatched moduli");
  }
  if (!rng.bernoulli(0.5)) return {CombineTag::kParityFail, std::nullopt, std::nullopt};
  const int zeroed = std::min(o1.zeroed_bits(), o2.zeroed_bits());
  return {CombineTag::kSuccess, PhaseObject(label_sub(o2.label(), o1.label()), zeroed),
          std::nullopt};
}

CombineOutcome project_first_two(const SolutionSet& set, std::span<const std::uint64_t> labels,
                                 int n, const BlockCombineConfig& cfg, Rng& rng) {
  const std::uint64_t m = set.m();
  if (m < cfg.m_min || m < 2) return {CombineTag::kMTooSmall, std::nullopt, m, set.z};
  if (m > cfg.m_max) return {CombineTag::kMTooLarge, std::nullopt, m, set.z};
  if (!rng.bernoulli(projection_success_probability(m))) {
    return {CombineTag::kProjectionFail, std::nullopt, m, set.z};
  }
  const Bitstring first = set.solutions[0];
  const Bitstring second = set.solutions[1];
  const Label hi(inner_product(second, labels, n), n);
  const Label lo(inner_product(first, labels, n), n);
  return {CombineTag::kSuccess, PhaseObject(label_sub(hi, lo), cfg.modulus_exponent()), m, set.z};
}

CombineOutcome combine_block(std::vector<PhaseObject> objs, const BlockCombineConfig& cfg,
                             Rng& rng) {
  if (objs.empty()) throw ParameterError("combine_block: empty batch");
  for (const auto& o : objs) require_live(o, "combine_block");
  const int n = objs.front().label().n();
  cfg.validate(n);
  if (static_cast<int>(objs.size()) != cfg.batch_size()) {
    throw ParameterError("combine_block: expected " + std::to_string(cfg.batch_size()) +
                         " objects, got " + std::to_string(objs.size()));
  }

  std::vector<std::uint64_t> labels;
  labels.reserve(objs.size());
  for (const auto& o : objs) {
    if (o.label().n() != n) throw ParameterError("combine_block: mismatched moduli");
    if (!low_bits_zero(o.label(), cfg.offset)) {
      throw ContractError("combine_block: input label " + std::to_string(o.label().value()) +
                          " has nonzero bits below " + std::to_string(cfg.offset));
    }
    labels.push_back(o.label().value());
  }
  objs.clear();

  // Measuring <b, y> mod 2^t on the uniform superposition over b: the outcome
  // is the register value of a uniformly chosen b.
  const int t = cfg.modulus_exponent();
  const auto sums = subset_sums(labels, t);
  const std::uint64_t z = sums[rng.bits(cfg.batch_size())];

  SolutionSet set;
  set.z = z;
  for (std::size_t b = 0; b < sums.size(); ++b) {
    if (sums[b] == z) set.solutions.push_back(static_cast<Bitstring>(b));
  }
  return project_first_two(set, labels, n, cfg, rng);
}

YStatistics y_statistics(int l, std::uint64_t trials, Rng& rng) {
  if (l < 1 || l + 4 > kMaxBatch) throw ParameterError("y_statistics: l out of range");
  if (trials < 1) throw ParameterError("y_statistics: trials must be >= 1");
  std::vector<std::uint64_t> y(static_cast<std::size_t>(l) + 4);
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t trial = 1; trial <= trials; ++trial) {
    for (auto& v : y) v = rng.bits(l);
    const auto sums = subset_sums(y, l);
    const auto zeros = std::count(sums.begin(), sums.end(), std::uint64_t{0});
    const double value = static_cast<double>(zeros - 1);
    const double delta = value - mean;
    mean += delta / static_cast<double>(trial);
    m2 += delta * (value - mean);
  }
  const double variance = trials > 1 ? m2 / static_cast<double>(trials - 1) : 0.0;
  return {mean, variance};
}

double y_expected_mean(int l) { return 16.0 - std::ldexp(1.0, -l); }

double y_expected_variance(int l) {
  return 16.0 - 17.0 * std::ldexp(1.0, -l) + std::ldexp(1.0, -2 * l);
}

}  // namespace dhsp
