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
#include <functional>
#include <optional>
#include <vector>

#include "dhsp/combine.hpp"
#include "dhsp/core.hpp"
#include "dhsp/oracle.hpp"
#include "dhsp/rng.hpp"

namespace dhsp {

/// Widths of the bit blocks a pipeline zeroes, lowest block first. Widths sum
/// to n - 1, so final outputs are labelled 0 or 2^{n-1}.
struct StageSchedule {
  int n = 0;
  std::vector<int> widths;

  /// k blocks of width w; requires k*w = n - 1.
  static StageSchedule uniform(int n, int k, int w);
  /// n - 1 bits over min(stages, n - 1) blocks as evenly as possible, wider
  /// blocks first.
  static StageSchedule even_split(int n, int stages);
  static StageSchedule from_params(const SieveParams& params);

  int stages() const { return static_cast<int>(widths.size()); }
  int offset(int stage) const;
  int max_width() const;
  void validate() const;
};

/// Per-stage block-combine success rate assumed by the default buffer-pipeline budget.
inline constexpr double kRegevStageSuccess = 0.12;

/// 8^k * 2^{max width}.
std::uint64_t kuperberg_default_budget(const StageSchedule& schedule);
/// ceil(8 * prod_i (w_i + 4) / kRegevStageSuccess).
std::uint64_t regev_default_budget(const StageSchedule& schedule);
std::uint64_t default_budget(Variant variant, const StageSchedule& schedule);

/// Called with (stage, label) for every object a stage forwards.
using ForwardObserver = std::function<void(int, const Label&)>;

/// Shared bookkeeping for the two pipeline shapes.
class PipelineBase {
 public:
  const TrialReport& report() const { return report_; }
  std::uint64_t live() const { return live_; }
  void set_observer(ForwardObserver observer) { observer_ = std::move(observer); }

 protected:
  PipelineBase(StageSchedule schedule, const Rng& rng);

  void admit(const PhaseObject& obj);
  void forward(int stage, PhaseObject& obj);
  std::optional<PhaseObject> emit(PhaseObject obj);

  StageSchedule schedule_;
  std::vector<Rng> stage_rngs_;
  TrialReport report_;
  std::uint64_t live_ = 0;
  ForwardObserver observer_;
};

/// Pile pipeline: each stage keeps a pile keyed by its block value
/// and pair-combines an arriving object with its match.
class PilePipeline : public PipelineBase {
 public:
  PilePipeline(StageSchedule schedule, const Rng& rng);

  /// Feeds one object through as far as it goes; returns it if it leaves
  /// the last stage.
  std::optional<PhaseObject> push(PhaseObject obj);

  std::size_t pile_size(int stage) const { return occupancy_.at(stage); }

 private:
  std::vector<std::vector<std::optional<PhaseObject>>> piles_;
  std::vector<std::size_t> occupancy_;
};

/// Polynomial-space pipeline: each stage buffers w + 4 objects and
/// block-combines them.
class BufferPipeline : public PipelineBase {
 public:
  BufferPipeline(StageSchedule schedule, const Rng& rng);

  std::optional<PhaseObject> push(PhaseObject obj);

  std::size_t buffer_size(int stage) const { return buffers_.at(stage).size(); }
  /// sum_i (w_i + 4) + 1; equals k(l+4)+1 for a uniform schedule.
  std::uint64_t space_bound() const;

 private:
  std::vector<std::vector<PhaseObject>> buffers_;
  std::vector<BlockCombineConfig> configs_;
};

struct SieveResult {
  std::optional<PhaseObject> object;  // labelled 2^{n-1} on success
  TrialReport report;
};

/// One attempt: draws fresh objects until a 2^{n-1}-labelled object leaves
/// the last stage or `budget` objects are spent. Stage i uses
/// rng.child(Rng::kStageStreamBase + i).
SieveResult run_pile_pipeline(HiddenOracle& oracle, const StageSchedule& schedule,
                              std::uint64_t budget, const Rng& rng);
SieveResult run_buffer_pipeline(HiddenOracle& oracle, const StageSchedule& schedule,
                                std::uint64_t budget, const Rng& rng);

SieveResult run_kuperberg(HiddenOracle& oracle, const SieveParams& params, const Rng& rng);
SieveResult run_regev(HiddenOracle& oracle, const SieveParams& params, const Rng& rng);

struct ThroughputResult {
  double pass_rate;
  double mean_outputs;
  std::vector<std::uint64_t> outputs;  // per trial
};

/// A lone pile stage of width k fed c * 2^k uniform objects per trial; a
/// trial passes when it emits at least (c/8) * 2^k objects.
ThroughputResult stage_throughput_check(int c, int k, int trials, const Rng& rng);

}  // namespace dhsp
