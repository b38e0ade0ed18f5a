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

#include <gtest/gtest.h>

#include <vector>

#include "dhsp/core.hpp"

using namespace dhsp;

TEST(chi_squared, perfect_fit_passes) {
  const std::vector<std::uint64_t> counts = {250, 250, 250, 250};
  const std::vector<double> p(4, 0.25);
  const auto r = chi_squared_test(counts, p);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.degrees_of_freedom, 3);
  EXPECT_NEAR(r.critical_value, 11.344866730144371, 1e-9);
  EXPECT_TRUE(r.pass);
}

TEST(chi_squared, statistic_and_critical_value) {
  // (60-50)^2/50 + (40-50)^2/50 = 4, below the 1-dof critical value 6.6349.
  const std::vector<std::uint64_t> counts = {60, 40};
  const std::vector<double> p = {0.5, 0.5};
  const auto r = chi_squared_test(counts, p);
  EXPECT_NEAR(r.statistic, 4.0, 1e-12);
  EXPECT_NEAR(r.critical_value, 6.634896601021215, 1e-9);
  EXPECT_NEAR(r.p_value, 0.04550026389635842, 1e-9);
  EXPECT_TRUE(r.pass);
  const std::vector<std::uint64_t> skewed = {70, 30};
  EXPECT_FALSE(chi_squared_test(skewed, p).pass);
}

TEST(chi_squared, pools_sparse_bins) {
  const std::vector<std::uint64_t> counts = {97, 1, 1, 1};
  const std::vector<double> p = {0.97, 0.01, 0.01, 0.01};
  const auto r = chi_squared_test(counts, p);
  EXPECT_EQ(r.degrees_of_freedom, 1);
  EXPECT_TRUE(r.pass);
}

TEST(chi_squared, impossible_outcome_fails) {
  const std::vector<std::uint64_t> counts = {99, 1};
  const std::vector<double> p = {1.0, 0.0};
  EXPECT_FALSE(chi_squared_test(counts, p).pass);
}

TEST(chi_squared, rejects_size_mismatch) {
  const std::vector<std::uint64_t> counts = {1, 2};
  const std::vector<double> p = {1.0};
  EXPECT_THROW(chi_squared_test(counts, p), ParameterError);
}
