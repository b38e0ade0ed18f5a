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

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dhsp {

/// Invalid user-supplied parameters (bad n, mismatched moduli, k/l that do
/// not fit the variant's shape, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A broken internal invariant: consumed objects reused, stage outputs with
/// nonzero low bits, an oracle that violates the reflection promise.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr int kMaxExponent = 62;

/// An integer modulo N = 2^n.
class Label {
 public:
  Label(std::uint64_t value, int n);

  std::uint64_t value() const { return value_; }
  int n() const { return n_; }
  std::uint64_t modulus() const { return std::uint64_t{1} << n_; }
  std::uint64_t mask() const { return modulus() - 1; }

  friend bool operator==(const Label&, const Label&) = default;

 private:
  std::uint64_t value_;
  int n_;
};

/// (a - b) mod 2^n.
Label label_sub(const Label& a, const Label& b);

/// True iff the t least significant bits of `a` are zero.
bool low_bits_zero(const Label& a, int t);

/// Bits (i-1)*w+1 .. i*w of `a`, counting from 1 at the least significant
/// bit, as an integer in [0, 2^w).
std::uint64_t block_value(const Label& a, int i, int w);

/// Bits [offset, offset + width) of `a`; the 0-indexed form of block_value
/// used by pipelines whose blocks are not all the same width.
std::uint64_t bit_field(const Label& a, int offset, int width);

/// The qubit |0> + exp(2 pi i d y / N)|1> identified by its label y.
///
/// Objects are affine: moving one out leaves the source consumed, and every
/// operation that accepts a consumed object throws ContractError. `zeroed_bits`
/// counts the low bits already certified zero by a pipeline.
class PhaseObject {
 public:
  explicit PhaseObject(Label label, int zeroed_bits = 0);

  PhaseObject(PhaseObject&& other) noexcept;
  PhaseObject& operator=(PhaseObject&& other) noexcept;
  PhaseObject(const PhaseObject&) = delete;
  PhaseObject& operator=(const PhaseObject&) = delete;
  ~PhaseObject() = default;

  const Label& label() const;
  int zeroed_bits() const { return zeroed_bits_; }
  bool live() const { return live_; }

  /// Certifies that the low `zeroed_bits` bits of the label are zero.
  /// Throws ContractError if they are not.
  void certify(int zeroed_bits);

 private:
  Label label_;
  int zeroed_bits_;
  bool live_ = true;
};

/// Throws ContractError unless `obj` is live.
void require_live(const PhaseObject& obj, std::string_view where);

enum class Variant { kKuperberg, kRegev };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);

/// Parameters of one LSB extraction.
///
/// The pile variant requires n = k^2 + 1, the buffer variant n = 1 + k*l. A budget of 0
/// selects the variant's default (see default_budget in sieve.hpp).
struct SieveParams {
  int n = 0;
  Variant variant = Variant::kKuperberg;
  int k = 1;
  int l = 1;
  std::uint64_t budget = 0;
  int max_retries = 8;
  std::uint64_t seed = 0;

  /// Throws ParameterError when the fields violate the variant's shape.
  void validate() const;

  static SieveParams kuperberg(int n, int k);
  static SieveParams regev(int n, int k, int l);
};

enum class CombineTag {
  kSuccess,
  kParityFail,
  kMTooSmall,
  kMTooLarge,
  kProjectionFail,
};

std::string_view to_string(CombineTag tag);

/// Result of one combination attempt. `object` is present iff the tag is
/// kSuccess; `m` is present iff the attempt was a block combine, and `z`
/// then holds the measured register value.
struct CombineOutcome {
  CombineTag tag;
  std::optional<PhaseObject> object;
  std::optional<std::uint64_t> m;
  std::optional<std::uint64_t> z = std::nullopt;

  bool ok() const { return tag == CombineTag::kSuccess; }
};

/// Per-run accounting for one pipeline run.
///
/// Object bookkeeping obeys
///   fresh_objects = live_at_end + destroyed_in_failed_combines
///                   + net_consumed_in_successful_combines + final_label_zero_discards
/// where a successful combine of b inputs contributes b - 1 (its inputs minus
/// the one object it produces).
struct TrialReport {
  std::uint64_t oracle_queries = 0;
  std::uint64_t fresh_objects = 0;
  std::vector<std::uint64_t> combines_attempted_per_stage;
  std::vector<std::uint64_t> combines_succeeded_per_stage;
  std::uint64_t peak_live_objects = 0;
  std::uint64_t live_at_end = 0;
  std::uint64_t destroyed_in_failed_combines = 0;
  std::uint64_t net_consumed_in_successful_combines = 0;
  std::uint64_t final_label_zero_discards = 0;
  std::uint64_t final_outputs = 0;
  std::uint64_t budget = 0;
  bool succeeded = false;
  std::chrono::nanoseconds wall_time{0};

  /// Accumulates counters of a later attempt (peak is a max, the rest add).
  void merge(const TrialReport& other);
  bool conserves_objects() const;
};

}  // namespace dhsp
