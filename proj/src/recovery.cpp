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

#include "dhsp/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dhsp {

int derive_stages(Variant variant, int n) {
  if (n < 2) throw ParameterError("derive_stages: n must be >= 2");
  const double bits = n - 1;
  if (variant == Variant::kKuperberg) {
    return std::max(1, static_cast<int>(std::lround(std::sqrt(bits))));
  }
  const double l = std::clamp(std::round(std::sqrt(n * std::log2(static_cast<double>(n)))),
                              1.0, bits);
  return std::max(1, static_cast<int>(std::lround(bits / l)));
}

int RecoveryConfig::stages_for(int n) const {
  if (n_min < 1) throw ParameterError("n_min must be >= 1");
  if (max_retries < 0) throw ParameterError("max_retries must be >= 0");
  if (k == 0) {
    if (variant == Variant::kRegev && l != 0) {
      if ((n - 1) % l != 0) throw ParameterError("l does not divide n-1");
      return (n - 1) / l;
    }
    return derive_stages(variant, n);
  }
  SieveParams p;
  p.n = n;
  p.variant = variant;
  p.k = k;
  p.l = variant == Variant::kRegev ? l : k;
  p.validate();
  return k;
}

StageSchedule RecoveryConfig::schedule_for(int top_n, int level_n) const {
  return StageSchedule::even_split(level_n, stages_for(top_n));
}

RecoveryError::RecoveryError(int level, std::vector<TrialReport> reports)
    : std::runtime_error("recovery failed at level " + std::to_string(level) + " after " +
                         std::to_string(reports.size()) + " attempts"),
      level_(level),
      reports_(std::move(reports)) {}

LsbResult recover_lsb(HiddenOracle& oracle, Variant variant, const StageSchedule& schedule,
                      std::uint64_t budget, int max_retries, const Rng& rng) {
  if (max_retries < 0) throw ParameterError("max_retries must be >= 0");
  if (budget == 0) budget = default_budget(variant, schedule);
  LsbResult result;
  result.schedule = schedule;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    const Rng attempt_rng = rng.child(static_cast<std::uint64_t>(attempt));
    const std::uint64_t attempt_budget = budget << attempt;
    SieveResult run = variant == Variant::kKuperberg
                          ? run_pile_pipeline(oracle, schedule, attempt_budget, attempt_rng)
                          : run_buffer_pipeline(oracle, schedule, attempt_budget, attempt_rng);
    result.total.merge(run.report);
    result.attempts.push_back(run.report);
    if (run.object) {
      result.bit = oracle.measure_hadamard(std::move(*run.object));
      return result;
    }
  }
  throw RecoveryError(0, std::move(result.attempts));
}

LsbResult recover_lsb(HiddenOracle& oracle, const SieveParams& params, const Rng& rng) {
  const auto schedule = StageSchedule::from_params(params);
  return recover_lsb(oracle, params.variant, schedule, params.budget, params.max_retries, rng);
}

std::uint64_t classical_base_solve(HiddenOracle& oracle) {
  const std::uint64_t identity = oracle.query({0, 0});
  for (std::uint64_t x = 0; x < oracle.modulus(); ++x) {
    if (oracle.query({1, x}) == identity) return x;
  }
  throw ContractError("no reflection (1, x) shares the identity's coset");
}

RecoveryResult recover_d(HiddenOracle& oracle, const RecoveryConfig& cfg, const Rng& rng) {
  const int top_n = oracle.n();
  if (top_n > cfg.n_min) cfg.stages_for(top_n);

  RecoveryResult result;
  HiddenOracle current = oracle;
  const std::uint64_t queries_before = oracle.query_count();
  int level = 0;
  while (current.n() > cfg.n_min) {
    const auto schedule = cfg.schedule_for(top_n, current.n());
    try {
      LsbResult lsb = recover_lsb(current, cfg.variant, schedule, cfg.budget, cfg.max_retries,
                                  rng.child(static_cast<std::uint64_t>(level)));
      result.bits.push_back(lsb.bit);
      result.total.merge(lsb.total);
      current = current.restrict_to(lsb.bit);
      result.levels.push_back(std::move(lsb));
    } catch (const RecoveryError& e) {
      throw RecoveryError(level, e.reports());
    }
    ++level;
  }

  const std::uint64_t before_base = current.query_count();
  result.base_n = current.n();
  result.residual = classical_base_solve(current);
  result.base_queries = current.query_count() - before_base;

  result.d = result.residual << result.bits.size();
  for (std::size_t t = 0; t < result.bits.size(); ++t) {
    result.d |= static_cast<std::uint64_t>(result.bits[t]) << t;
  }
  result.total_queries = oracle.query_count() - queries_before;
  return result;
}

}  // namespace dhsp
