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

#include "dhsp/sieve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace dhsp {

StageSchedule StageSchedule::uniform(int n, int k, int w) {
  if (k < 1 || w < 1 || k * w != n - 1) {
    throw ParameterError("uniform schedule needs k*w = n-1, got n=" + std::to_string(n) +
                         ", k=" + std::to_string(k) + ", w=" + std::to_string(w));
  }
  StageSchedule s{n, std::vector<int>(static_cast<std::size_t>(k), w)};
  s.validate();
  return s;
}

StageSchedule StageSchedule::even_split(int n, int stages) {
  if (n < 2) throw ParameterError("schedule needs n >= 2");
  if (stages < 1) throw ParameterError("schedule needs at least one stage");
  const int bits = n - 1;
  const int count = std::min(stages, bits);
  StageSchedule s{n, {}};
  for (int i = 0; i < count; ++i) {
    s.widths.push_back(bits / count + (i < bits % count ? 1 : 0));
  }
  s.validate();
  return s;
}

StageSchedule StageSchedule::from_params(const SieveParams& params) {
  params.validate();
  const int w = params.variant == Variant::kKuperberg ? params.k : params.l;
  return uniform(params.n, params.k, w);
}

int StageSchedule::offset(int stage) const {
  return std::accumulate(widths.begin(), widths.begin() + stage, 0);
}

int StageSchedule::max_width() const { return *std::max_element(widths.begin(), widths.end()); }

void StageSchedule::validate() const {
  if (n < 2 || n > kMaxExponent) throw ParameterError("schedule n outside [2, 62]");
  if (widths.empty()) throw ParameterError("schedule has no stages");
  for (int w : widths) {
    if (w < 1 || w + 4 > kMaxBatch) {
      throw ParameterError("stage width " + std::to_string(w) + " outside [1, " +
                           std::to_string(kMaxBatch - 4) + "]");
    }
  }
  if (std::accumulate(widths.begin(), widths.end(), 0) != n - 1) {
    throw ParameterError("stage widths must sum to n-1=" + std::to_string(n - 1));
  }
}

std::uint64_t kuperberg_default_budget(const StageSchedule& schedule) {
  const double b = std::pow(8.0, schedule.stages()) * std::ldexp(1.0, schedule.max_width());
  return static_cast<std::uint64_t>(std::min(b, 1e18));
}

std::uint64_t regev_default_budget(const StageSchedule& schedule) {
  double b = 8.0;
  for (int w : schedule.widths) b *= (w + 4) / kRegevStageSuccess;
  return static_cast<std::uint64_t>(std::ceil(std::min(b, 1e18)));
}

std::uint64_t default_budget(Variant variant, const StageSchedule& schedule) {
  return variant == Variant::kKuperberg ? kuperberg_default_budget(schedule)
                                        : regev_default_budget(schedule);
}

PipelineBase::PipelineBase(StageSchedule schedule, const Rng& rng)
    : schedule_(std::move(schedule)) {
  schedule_.validate();
  for (int i = 0; i < schedule_.stages(); ++i) {
    stage_rngs_.push_back(rng.child(Rng::kStageStreamBase + static_cast<std::uint64_t>(i)));
  }
  report_.combines_attempted_per_stage.assign(schedule_.widths.size(), 0);
  report_.combines_succeeded_per_stage.assign(schedule_.widths.size(), 0);
}

void PipelineBase::admit(const PhaseObject& obj) {
  require_live(obj, "pipeline push");
  if (obj.label().n() != schedule_.n) {
    throw ParameterError("pipeline push: object modulus does not match schedule");
  }
  ++report_.fresh_objects;
  ++live_;
  report_.peak_live_objects = std::max(report_.peak_live_objects, live_);
}

void PipelineBase::forward(int stage, PhaseObject& obj) {
  obj.certify(schedule_.offset(stage) + schedule_.widths[static_cast<std::size_t>(stage)]);
  if (observer_) observer_(stage, obj.label());
}

std::optional<PhaseObject> PipelineBase::emit(PhaseObject obj) {
  ++report_.final_outputs;
  --live_;
  return obj;
}

PilePipeline::PilePipeline(StageSchedule schedule, const Rng& rng)
    : PipelineBase(std::move(schedule), rng) {
  for (int w : schedule_.widths) {
    piles_.emplace_back(std::size_t{1} << w);
    occupancy_.push_back(0);
  }
}

std::optional<PhaseObject> PilePipeline::push(PhaseObject obj) {
  admit(obj);
  for (int stage = 0; stage < schedule_.stages(); ++stage) {
    const auto s = static_cast<std::size_t>(stage);
    const std::uint64_t key = bit_field(obj.label(), schedule_.offset(stage), schedule_.widths[s]);
    auto& slot = piles_[s][key];
    if (!slot) {
      slot.emplace(std::move(obj));
      ++occupancy_[s];
      return std::nullopt;
    }
    PhaseObject match = std::move(*slot);
    slot.reset();
    --occupancy_[s];
    ++report_.combines_attempted_per_stage[s];
    live_ -= 2;
    CombineOutcome out = combine_pair(std::move(match), std::move(obj), stage_rngs_[s]);
    if (!out.ok()) {
      report_.destroyed_in_failed_combines += 2;
      return std::nullopt;
    }
    ++report_.combines_succeeded_per_stage[s];
    ++report_.net_consumed_in_successful_combines;
    ++live_;
    obj = std::move(*out.object);
    forward(stage, obj);
  }
  return emit(std::move(obj));
}

BufferPipeline::BufferPipeline(StageSchedule schedule, const Rng& rng)
    : PipelineBase(std::move(schedule), rng) {
  for (int stage = 0; stage < schedule_.stages(); ++stage) {
    BlockCombineConfig cfg;
    cfg.l = schedule_.widths[static_cast<std::size_t>(stage)];
    cfg.offset = schedule_.offset(stage);
    cfg.validate(schedule_.n);
    configs_.push_back(cfg);
    buffers_.emplace_back();
    buffers_.back().reserve(static_cast<std::size_t>(cfg.batch_size()));
  }
}

std::uint64_t BufferPipeline::space_bound() const {
  std::uint64_t bound = 1;
  for (const auto& cfg : configs_) bound += static_cast<std::uint64_t>(cfg.batch_size());
  return bound;
}

std::optional<PhaseObject> BufferPipeline::push(PhaseObject obj) {
  admit(obj);
  for (int stage = 0; stage < schedule_.stages(); ++stage) {
    const auto s = static_cast<std::size_t>(stage);
    auto& buffer = buffers_[s];
    buffer.push_back(std::move(obj));
    const auto batch = static_cast<std::size_t>(configs_[s].batch_size());
    if (buffer.size() < batch) return std::nullopt;

    std::vector<PhaseObject> inputs;
    inputs.swap(buffer);
    buffer.reserve(batch);
    ++report_.combines_attempted_per_stage[s];
    live_ -= batch;
    CombineOutcome out = combine_block(std::move(inputs), configs_[s], stage_rngs_[s]);
    if (!out.ok()) {
      report_.destroyed_in_failed_combines += batch;
      return std::nullopt;
    }
    ++report_.combines_succeeded_per_stage[s];
    report_.net_consumed_in_successful_combines += batch - 1;
    ++live_;
    obj = std::move(*out.object);
    forward(stage, obj);
  }
  return emit(std::move(obj));
}

namespace {

template <typename Pipeline>
SieveResult drive(HiddenOracle& oracle, const StageSchedule& schedule, std::uint64_t budget,
                  const Rng& rng) {
  if (oracle.n() != schedule.n) {
    throw ParameterError("oracle n=" + std::to_string(oracle.n()) +
                         " does not match schedule n=" + std::to_string(schedule.n));
  }
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t queries_before = oracle.query_count();
  const Label target(std::uint64_t{1} << (schedule.n - 1), schedule.n);

  Pipeline pipeline(schedule, rng);
  SieveResult result;
  std::uint64_t discards = 0;
  while (pipeline.report().fresh_objects < budget) {
    std::optional<PhaseObject> out = pipeline.push(oracle.sample_phase_qubit());
    if (!out) continue;
    if (out->label() == target) {
      result.object = std::move(out);
      break;
    }
    if (out->label().value() != 0) {
      throw ContractError("final stage emitted label " + std::to_string(out->label().value()));
    }
    ++discards;
  }

  result.report = pipeline.report();
  result.report.final_label_zero_discards = discards;
  result.report.live_at_end = pipeline.live() + (result.object ? 1 : 0);
  result.report.succeeded = result.object.has_value();
  result.report.budget = budget;
  result.report.oracle_queries = oracle.query_count() - queries_before;
  result.report.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return result;
}

}  // namespace

SieveResult run_pile_pipeline(HiddenOracle& oracle, const StageSchedule& schedule,
                              std::uint64_t budget, const Rng& rng) {
  return drive<PilePipeline>(oracle, schedule, budget, rng);
}

SieveResult run_buffer_pipeline(HiddenOracle& oracle, const StageSchedule& schedule,
                                std::uint64_t budget, const Rng& rng) {
  return drive<BufferPipeline>(oracle, schedule, budget, rng);
}

SieveResult run_kuperberg(HiddenOracle& oracle, const SieveParams& params, const Rng& rng) {
  if (params.variant != Variant::kKuperberg) throw ParameterError("run_kuperberg: wrong variant");
  const auto schedule = StageSchedule::from_params(params);
  const std::uint64_t budget =
      params.budget ? params.budget : kuperberg_default_budget(schedule);
  return run_pile_pipeline(oracle, schedule, budget, rng);
}

SieveResult run_regev(HiddenOracle& oracle, const SieveParams& params, const Rng& rng) {
  if (params.variant != Variant::kRegev) throw ParameterError("run_regev: wrong variant");
  const auto schedule = StageSchedule::from_params(params);
  const std::uint64_t budget = params.budget ? params.budget : regev_default_budget(schedule);
  return run_buffer_pipeline(oracle, schedule, budget, rng);
}

ThroughputResult stage_throughput_check(int c, int k, int trials, const Rng& rng) {
  if (c < 8) throw ParameterError("stage_throughput_check needs c >= 8");
  if (k < 1 || k + 1 > kMaxExponent || trials < 1) {
    throw ParameterError("stage_throughput_check: bad k or trials");
  }
  const StageSchedule single{k + 1, {k}};
  const std::uint64_t inputs = static_cast<std::uint64_t>(c) << k;
  const double threshold = static_cast<double>(c) / 8.0 * std::ldexp(1.0, k);

  ThroughputResult result{0.0, 0.0, {}};
  int passes = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng trial_rng = rng.child(static_cast<std::uint64_t>(trial));
    Rng labels = trial_rng.child(Rng::kOracleStream);
    PilePipeline stage(single, trial_rng);
    std::uint64_t outputs = 0;
    for (std::uint64_t i = 0; i < inputs; ++i) {
      if (stage.push(PhaseObject(Label(labels.bits(k + 1), k + 1)))) ++outputs;
    }
    result.outputs.push_back(outputs);
    if (static_cast<double>(outputs) >= threshold) ++passes;
  }
  result.pass_rate = static_cast<double>(passes) / trials;
  result.mean_outputs =
      static_cast<double>(std::accumulate(result.outputs.begin(), result.outputs.end(),
                                          std::uint64_t{0})) /
      trials;
  return result;
}

}  // namespace dhsp
