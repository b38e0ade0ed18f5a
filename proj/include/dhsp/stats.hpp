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

namespace dhsp {

inline constexpr double kSignificance = 0.01;

struct ChiSquaredResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double critical_value = 0.0;
  double p_value = 1.0;
  bool pass = true;
};

/// Pearson goodness-of-fit of `observed` counts against `probabilities`.
///
/// Bins whose expected count is below 5 are pooled into one bin. A bin with
/// probability 0 and a nonzero count fails outright.
ChiSquaredResult chi_squared_test(std::span<const std::uint64_t> observed,
                                  std::span<const double> probabilities,
                                  double alpha = kSignificance);

}  // namespace dhsp
