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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dhsp/core.hpp"

namespace dhsp::harness {

enum class Format { kCsv, kJson };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Parsed command line. k = 0 / l = 0 derive the shape from n; an absent d
/// draws a random secret per trial.
struct ExperimentSpec {
  std::string subcommand;
  std::optional<int> n;
  std::vector<int> n_grid;
  std::optional<Variant> variant;
  int k = 0;
  int l = 0;
  std::optional<std::uint64_t> d;
  std::uint64_t seed = 0;
  int trials = 1;
  std::uint64_t budget = 0;
  int max_retries = 8;
  Format format = Format::kCsv;
  bool wall_time = false;

  /// Throws ParameterError on an inconsistent spec; sorts n_grid.
  void validate();
};

/// CSV column order for bench records. The first ten columns are fixed;
/// max_peak_live, space_bound, space_ok and status follow.
const std::vector<std::string>& bench_columns();

/// Each returns the process exit code and writes records to `out`.
int cmd_run(ExperimentSpec spec, std::ostream& out);
int cmd_bench(ExperimentSpec spec, std::ostream& out);
int cmd_verify(ExperimentSpec spec, std::ostream& out);

/// Dispatches on spec.subcommand.
int dispatch(ExperimentSpec spec, std::ostream& out);

}  // namespace dhsp::harness
