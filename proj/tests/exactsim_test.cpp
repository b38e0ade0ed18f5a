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

#include "dhsp/exactsim.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "dhsp/combine.hpp"
#include "dhsp/oracle.hpp"
#include "dhsp/stats.hpp"

using namespace dhsp;
using namespace dhsp::exact;

TEST(fourier, matrix_is_unitary_and_matches_formula) {
  for (int n = 0; n <= 6; ++n) {
    const auto f = fourier_matrix<double>(n);
    const auto size = f.rows();
    const auto identity = ComplexMatrix<double>::Identity(size, size);
    EXPECT_LT((f.adjoint() * f - identity).norm(), 1e-9);
    for (Eigen::Index y = 0; y < size; ++y) {
      for (Eigen::Index x = 0; x < size; ++x) {
        const double angle = 2 * std::numbers::pi * static_cast<double>((x * y) % size) / size;
        const std::complex<double> want = std::polar(1.0, angle) / std::sqrt(double(size));
        ASSERT_LT(std::abs(f(y, x) - want), 1e-12);
      }
    }
  }
  EXPECT_THROW(fourier_matrix<double>(13), ParameterError);
}

TEST(fourier, float_scalar_instantiates) {
  const auto f = fourier_matrix<float>(3);
  EXPECT_LT((f.adjoint() * f - ComplexMatrix<float>::Identity(8, 8)).norm(), 1e-5f);
}

TEST(coset_routine, theta_matches_label_phase) {
  Rng rng(1);
  for (int n = 1; n <= 8; ++n) {
    for (int run = 0; run < 40; ++run) {
      const std::uint64_t d = rng.bits(n);
      const auto s = coset_state_routine<double>(n, d, rng);
      ASSERT_LT(s.max_norm_error, 1e-9);
      ASSERT_TRUE(s.qubit.is_normalized());
      ASSERT_LT(angle_distance(s.theta, phase_angle<double>(d * s.y, n)), 1e-9);
      ASSERT_NEAR(overlap(s.qubit, AmplitudeState<double>::phase_qubit(s.theta)), 1.0, 1e-9);
    }
  }
}

TEST(coset_routine, zero_secret_gives_plus_state) {
  Rng rng(2);
  for (int run = 0; run < 20; ++run) {
    const auto s = coset_state_routine<double>(1, 0, rng);
    EXPECT_LT(angle_distance(s.theta, 0.0), 1e-12);
  }
}

TEST(coset_routine, y_marginal_uniform) {
  for (std::uint64_t d : {0u, 3u, 17u}) {
    const auto p = coset_y_marginal<double>(5, d);
    for (double v : p) ASSERT_NEAR(v, 1.0 / 32, 1e-9);
  }
  Rng rng(3);
  std::vector<std::uint64_t> counts(32, 0);
  for (int i = 0; i < 100000; ++i) ++counts[coset_state_routine<double>(5, 11, rng).y];
  const std::vector<double> uniform(32, 1.0 / 32);
  const auto r = chi_squared_test(counts, uniform);
  EXPECT_TRUE(r.pass) << "statistic " << r.statistic;
}

TEST(coset_routine, rejects_large_n) {
  Rng rng(0);
  EXPECT_THROW(coset_state_routine<double>(13, 0, rng), ParameterError);
  EXPECT_THROW(coset_state_routine<double>(3, 8, rng), ParameterError);
}

TEST(pair, parity_probability_exactly_half) {
  Rng rng(4);
  for (int n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto y1 = rng.bits(n), y2 = rng.bits(n), d = rng.bits(n);
      const auto r = exact_pair_combine<double>(y1, y2, n, d, rng);
      ASSERT_NEAR(r.odd_probability, 0.5, 1e-12);
      ASSERT_TRUE(r.two_qubit.is_normalized());
      const auto odd = AmplitudeState<double>::phase_qubit(phase_angle<double>(d * (y2 - y1), n));
      ASSERT_NEAR(overlap(r.odd_state, odd), 1.0, 1e-9);
      AmplitudeState<double> even;
      even.basis = {0, 1};
      even.amplitudes.resize(2);
      even.amplitudes << 1.0, root_of_unity<double>(d * (y1 + y2), n);
      even.normalize();
      ASSERT_NEAR(overlap(r.even_state, even), 1.0, 1e-9);
    }
  }
}

TEST(pair, equal_labels_give_plus_state) {
  Rng rng(5);
  const auto r = exact_pair_combine<double>(9, 9, 6, 41, rng);
  EXPECT_NEAR(overlap(r.odd_state, AmplitudeState<double>::phase_qubit(0.0)), 1.0, 1e-12);
}

TEST(block, z_probabilities_match_counting) {
  Rng rng(6);
  for (int l = 1; l <= 4; ++l) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<std::uint64_t> y(static_cast<std::size_t>(l + 4));
      for (auto& v : y) v = rng.bits(8);
      const auto r = exact_block_combine<double>(y, 8, rng.bits(8), l, rng);
      EXPECT_LT(r.max_norm_error, 1e-9);
      const auto p = z_distribution(y, l);
      double covered = 0;
      for (std::uint64_t z = 0; z < p.size(); ++z) {
        const auto* br = r.branch(z);
        const double exact = br ? br->probability : 0.0;
        ASSERT_NEAR(exact, p[z], 1e-9);
        covered += exact;
      }
      ASSERT_NEAR(covered, 1.0, 1e-9);
    }
  }
}

TEST(block, zero_labels_force_z_zero) {
  Rng rng(7);
  const std::vector<std::uint64_t> y(6, 0);
  const auto r = exact_block_combine<double>(y, 6, 13, 2, rng);
  ASSERT_EQ(r.branches.size(), 1u);
  EXPECT_EQ(r.sampled_z, 0u);
  EXPECT_NEAR(r.branches[0].probability, 1.0, 1e-12);
}

TEST(block, projected_phase_matches_label_difference) {
  Rng rng(8);
  const int n = 8;
  for (int trial = 0; trial < 30; ++trial) {
    const int l = 1 + static_cast<int>(rng.below(4));
    std::vector<std::uint64_t> y(static_cast<std::size_t>(l + 4));
    for (auto& v : y) v = rng.bits(n);
    const std::uint64_t d = rng.bits(n);
    const auto r = exact_block_combine<double>(y, n, d, l, rng);
    const auto sums = subset_sums(y, n);
    for (const auto& br : r.branches) {
      if (!br.projected_phase) continue;
      const auto& b = br.residual.basis;
      const std::uint64_t diff = sums[b[1]] - sums[b[0]];
      ASSERT_LT(angle_distance(*br.projected_phase, phase_angle<double>(d * diff, n)), 1e-9);
    }
  }
}

TEST(hadamard, distribution_matches_sin_squared) {
  for (int n = 1; n <= 8; ++n) {
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); y += 3) {
      const std::uint64_t d = (y * 7 + 1) & ((std::uint64_t{1} << n) - 1);
      const auto q = AmplitudeState<double>::phase_qubit(phase_angle<double>(d * y, n));
      const auto p = hadamard_distribution(q);
      ASSERT_NEAR(p(1), hadamard_one_probability(d, Label(y, n)), 1e-9);
      ASSERT_NEAR(p(0) + p(1), 1.0, 1e-12);
    }
  }
}
