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

#include "dhsp/core.hpp"

#include <gtest/gtest.h>

#include "dhsp/rng.hpp"

using namespace dhsp;

TEST(label, sub_examples) {
  EXPECT_EQ(label_sub(Label(5, 4), Label(3, 4)).value(), 2u);
  EXPECT_EQ(label_sub(Label(3, 4), Label(5, 4)).value(), 14u);
  EXPECT_EQ(label_sub(Label(7, 4), Label(7, 4)).value(), 0u);
}

TEST(label, sub_exhaustive_n5) {
  for (std::uint64_t a = 0; a < 32; ++a) {
    for (std::uint64_t b = 0; b < 32; ++b) {
      const auto r = label_sub(Label(a, 5), Label(b, 5)).value();
      ASSERT_LT(r, 32u);
      ASSERT_EQ((r + b) % 32, a);
    }
  }
}

TEST(label, sub_at_max_exponent) {
  const int n = kMaxExponent;
  const std::uint64_t top = (std::uint64_t{1} << n) - 1;
  EXPECT_EQ(label_sub(Label(0, n), Label(1, n)).value(), top);
  EXPECT_EQ(label_sub(Label(top, n), Label(top, n)).value(), 0u);
}

TEST(label, rejects_bad_inputs) {
  EXPECT_THROW(Label(16, 4), ParameterError);
  EXPECT_THROW(Label(0, 0), ParameterError);
  EXPECT_THROW(Label(0, 63), ParameterError);
  EXPECT_THROW(label_sub(Label(1, 4), Label(1, 5)), ParameterError);
}

TEST(label, low_bits_zero_examples) {
  EXPECT_TRUE(low_bits_zero(Label(8, 4), 3));
  EXPECT_FALSE(low_bits_zero(Label(8, 4), 4));
  EXPECT_TRUE(low_bits_zero(Label(0, 4), 4));
  EXPECT_TRUE(low_bits_zero(Label(7, 4), 0));
}

TEST(label, low_bits_zero_matches_divisibility) {
  for (std::uint64_t a = 0; a < 64; ++a) {
    for (int t = 0; t <= 6; ++t) {
      ASSERT_EQ(low_bits_zero(Label(a, 6), t), a % (std::uint64_t{1} << t) == 0) << a << " " << t;
    }
  }
}

TEST(label, block_value_examples) {
  // Positions count from 1 at the least significant bit: block 2 of width 3
  // is bits 4..6, i.e. floor(a / 8) mod 8.
  EXPECT_EQ(block_value(Label(0b1011000, 7), 2, 3), 0b011u);
  EXPECT_EQ(block_value(Label(0, 7), 1, 3), 0u);
  EXPECT_EQ(block_value(Label(64, 7), 2, 3), 0u);
  EXPECT_EQ(block_value(Label(0b1011000, 7), 1, 4), 0b1000u);
  EXPECT_EQ(bit_field(Label(0b1011000, 7), 4, 3), 0b101u);
  for (std::uint64_t a = 0; a < 128; ++a) {
    for (int w = 1; w <= 3; ++w) {
      for (int i = 1; i * w <= 7; ++i) {
        ASSERT_EQ(block_value(Label(a, 7), i, w), (a >> ((i - 1) * w)) % (1u << w));
      }
    }
  }
}

TEST(label, blocks_reassemble_label) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Label a(rng.bits(13), 13);
    std::uint64_t rebuilt = 0;
    for (int i = 1; i <= 4; ++i) rebuilt |= block_value(a, i, 3) << (3 * (i - 1));
    rebuilt |= bit_field(a, 12, 1) << 12;
    ASSERT_EQ(rebuilt, a.value());
  }
}

TEST(label, block_value_rejects_out_of_range) {
  EXPECT_THROW(block_value(Label(0, 7), 3, 3), ParameterError);
  EXPECT_THROW(block_value(Label(0, 7), 0, 3), ParameterError);
  EXPECT_THROW(bit_field(Label(0, 7), 5, 3), ParameterError);
}

TEST(phase_object, moved_from_is_consumed) {
  PhaseObject a(Label(3, 4));
  PhaseObject b(std::move(a));
  EXPECT_FALSE(a.live());
  EXPECT_TRUE(b.live());
  EXPECT_THROW((void)a.label(), ContractError);
  EXPECT_THROW(require_live(a, "test"), ContractError);
  EXPECT_EQ(b.label().value(), 3u);
}

TEST(phase_object, certify_checks_low_bits) {
  PhaseObject a(Label(8, 4));
  EXPECT_NO_THROW(a.certify(3));
  EXPECT_EQ(a.zeroed_bits(), 3);
  EXPECT_THROW(a.certify(4), ContractError);
}

TEST(sieve_params, shapes) {
  EXPECT_NO_THROW(SieveParams::kuperberg(10, 3).validate());
  EXPECT_NO_THROW(SieveParams::regev(13, 3, 4).validate());
  EXPECT_THROW(SieveParams::regev(12, 3, 4).validate(), ParameterError);
  EXPECT_THROW(SieveParams::kuperberg(11, 3).validate(), ParameterError);
  EXPECT_THROW(SieveParams::kuperberg(1, 0).validate(), ParameterError);
  EXPECT_THROW(SieveParams::regev(64, 1, 63).validate(), ParameterError);
}

TEST(variant, round_trip) {
  EXPECT_EQ(parse_variant("kuperberg"), Variant::kKuperberg);
  EXPECT_EQ(parse_variant(to_string(Variant::kRegev)), Variant::kRegev);
  EXPECT_THROW(parse_variant("simon"), ParameterError);
}

TEST(trial_report, merge_and_conservation) {
  TrialReport a;
  a.fresh_objects = 10;
  a.live_at_end = 3;
  a.destroyed_in_failed_combines = 4;
  a.net_consumed_in_successful_combines = 2;
  a.final_label_zero_discards = 1;
  a.peak_live_objects = 5;
  a.combines_attempted_per_stage = {3, 1};
  a.combines_succeeded_per_stage = {2, 0};
  EXPECT_TRUE(a.conserves_objects());
  TrialReport b = a;
  b.peak_live_objects = 7;
  a.merge(b);
  EXPECT_EQ(a.fresh_objects, 20u);
  EXPECT_EQ(a.peak_live_objects, 7u);
  EXPECT_EQ(a.combines_attempted_per_stage, (std::vector<std::uint64_t>{6, 2}));
  EXPECT_TRUE(a.conserves_objects());
  a.fresh_objects += 1;
  EXPECT_FALSE(a.conserves_objects());
}

TEST(rng, child_streams_ignore_parent_position) {
  Rng a(42);
  Rng b(42);
  (void)b.next_u64();
  EXPECT_EQ(a.child(7).next_u64(), b.child(7).next_u64());
  EXPECT_NE(a.child(7).next_u64(), a.child(8).next_u64());
}

TEST(rng, below_and_bits_stay_in_range) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    ASSERT_LT(rng.below(7), 7u);
    ASSERT_LT(rng.bits(5), 32u);
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  EXPECT_EQ(rng.bits(0), 0u);
}
