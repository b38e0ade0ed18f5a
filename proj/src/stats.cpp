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

#include "dhsp/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <limits>
#include <numeric>

#include "dhsp/core.hpp"

namespace dhsp {

ChiSquaredResult chi_squared_test(std::span<const std::uint64_t> observed,
                                  std::span<const double> probabilities, double alpha) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw ParameterError("chi_squared_test: observed and expected sizes differ");
  }
  const double total =
      static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  ChiSquaredResult r;
  if (total == 0) return r;

  double pooled_expected = 0.0;
  double pooled_observed = 0.0;
  int bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = probabilities[i] * total;
    const auto count = static_cast<double>(observed[i]);
    if (probabilities[i] <= 0.0) {
      if (count > 0) {
        r.statistic = std::numeric_limits<double>::infinity();
        r.p_value = 0.0;
        r.pass = false;
        return r;
      }
      continue;
    }
    if (expected < 5.0) {
      pooled_expected += expected;
      pooled_observed += count;
      continue;
    }
    r.statistic += (count - expected) * (count - expected) / expected;
    ++bins;
  }
  if (pooled_expected > 0.0) {
    r.statistic += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) /
                   pooled_expected;
    ++bins;
  }
  r.degrees_of_freedom = bins - 1;
  if (r.degrees_of_freedom < 1) {
    r.pass = r.statistic == 0.0;
    r.p_value = r.pass ? 1.0 : 0.0;
    return r;
  }
  const boost::math::chi_squared dist(r.degrees_of_freedom);
  r.critical_value = boost::math::quantile(boost::math::complement(dist, alpha));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  r.pass = r.statistic <= r.critical_value;
  return r;
}

}  // namespace dhsp
