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
#include <stdexcept>
#include <vector>

#include "dhsp/core.hpp"
#include "dhsp/oracle.hpp"
#include "dhsp/rng.hpp"
#include "dhsp/sieve.hpp"

namespace dhsp {

/// How recover_d sieves each level.
///
/// k (and l for the buffer variant) fix the top-level shape and are checked against n
/// there; 0 derives them from n. Every level keeps k stages (fewer once
/// n - 1 < k) and splits its n - 1 bits evenly over them, so a top level of
/// the exact shape runs the uniform schedule and the levels below run the
/// nearest uneven one.
struct RecoveryConfig {
  Variant variant = Variant::kKuperberg;
  int k = 0;
  int l = 0;
  int n_min = 3;
  int max_retries = 8;
  std::uint64_t budget = 0;  // 0: variant default per level

  /// Top-level stage count for an n-bit instance; validates k/l if set.
  int stages_for(int n) const;
  StageSchedule schedule_for(int top_n, int level_n) const;
};

/// Default k for an n-bit instance: sqrt(n-1) rounded for the pile variant, or
/// (n-1)/l with l ~ sqrt(n log2 n) for the buffer variant.
int derive_stages(Variant variant, int n);

struct LsbResult {
  int bit = 0;
  StageSchedule schedule;
  std::vector<TrialReport> attempts;
  TrialReport total;
};

class RecoveryError : public std::runtime_error {
 public:
  RecoveryError(int level, std::vector<TrialReport> reports);

  int level() const { return level_; }
  const std::vector<TrialReport>& reports() const { return reports_; }

 private:
  int level_;
  std::vector<TrialReport> reports_;
};

/// Sieves for a 2^{n-1}-labelled object, doubling the budget after each
/// failed attempt (attempt a uses rng.child(a)), then measures it in the
/// Hadamard basis. Throws RecoveryError (level 0) when every attempt fails.
LsbResult recover_lsb(HiddenOracle& oracle, Variant variant, const StageSchedule& schedule,
                      std::uint64_t budget, int max_retries, const Rng& rng);
LsbResult recover_lsb(HiddenOracle& oracle, const SieveParams& params, const Rng& rng);

/// Scans x for query(1, x) == query(0, 0); at most 2^n + 1 queries.
std::uint64_t classical_base_solve(HiddenOracle& oracle);

struct RecoveryResult {
  std::uint64_t d = 0;
  std::vector<int> bits;  // learned LSBs, level 0 first
  std::vector<LsbResult> levels;
  int base_n = 0;
  std::uint64_t residual = 0;
  std::uint64_t base_queries = 0;
  std::uint64_t total_queries = 0;
  TrialReport total;
};

/// Learns d bit by bit over restricted oracles, finishing with a classical
/// scan once n <= n_min. Level t uses rng.child(t).
RecoveryResult recover_d(HiddenOracle& oracle, const RecoveryConfig& cfg, const Rng& rng);

}  // namespace dhsp
