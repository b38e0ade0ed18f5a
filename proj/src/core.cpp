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

#include <algorithm>
#include <utility>

namespace dhsp {

Label::Label(std::uint64_t value, int n) : value_(value), n_(n) {
  if (n < 1 || n > kMaxExponent) {
    throw ParameterError("label exponent n=" + std::to_string(n) + " outside [1, 62]");
  }
  if (value >= modulus()) {
    throw ParameterError("label value " + std::to_string(value) + " not below 2^" +
                         std::to_string(n));
  }
}

Label label_sub(const Label& a, const Label& b) {
  if (a.n() != b.n()) {
    throw ParameterError("label_sub: mismatched moduli 2^" + std::to_string(a.n()) + " and 2^" +
                         std::to_string(b.n()));
  }
  return Label((a.value() - b.value()) & a.mask(), a.n());
}

bool low_bits_zero(const Label& a, int t) {
  if (t < 0 || t > a.n()) {
    throw ParameterError("low_bits_zero: t=" + std::to_string(t) + " outside [0, n]");
  }
  const std::uint64_t low = (std::uint64_t{1} << t) - 1;
  return (a.value() & low) == 0;
}

std::uint64_t bit_field(const Label& a, int offset, int width) {
  if (offset < 0 || width < 0 || offset + width > a.n()) {
    throw ParameterError("bit field [" + std::to_string(offset) + ", " +
                         std::to_string(offset + width) + ") exceeds n=" + std::to_string(a.n()));
  }
  return (a.value() >> offset) & ((std::uint64_t{1} << width) - 1);
}

std::uint64_t block_value(const Label& a, int i, int w) {
  if (i < 1 || w < 0 || static_cast<long>(i) * w > a.n()) {
    throw ParameterError("block " + std::to_string(i) + " of width " + std::to_string(w) +
                         " out of range for n=" + std::to_string(a.n()));
  }
  return bit_field(a, (i - 1) * w, w);
}

PhaseObject::PhaseObject(Label label, int zeroed_bits) : label_(label), zeroed_bits_(0) {
  certify(zeroed_bits);
}

PhaseObject::PhaseObject(PhaseObject&& other) noexcept
    : label_(other.label_),
      zeroed_bits_(other.zeroed_bits_),
      live_(std::exchange(other.live_, false)) {}

PhaseObject& PhaseObject::operator=(PhaseObject&& other) noexcept {
  if (this != &other) {
    label_ = other.label_;
    zeroed_bits_ = other.zeroed_bits_;
    live_ = std::exchange(other.live_, false);
  }
  return *this;
}

const Label& PhaseObject::label() const {
  require_live(*this, "PhaseObject::label");
  return label_;
}

void PhaseObject::certify(int zeroed_bits) {
  if (zeroed_bits < 0 || zeroed_bits > label_.n() || !low_bits_zero(label_, zeroed_bits)) {
    throw ContractError("label " + std::to_string(label_.value()) + " does not have its low " +
                        std::to_string(zeroed_bits) + " bits zero");
  }
  zeroed_bits_ = zeroed_bits;
}

void require_live(const PhaseObject& obj, std::string_view where) {
  if (!obj.live()) {
    throw ContractError(std::string(where) + ": phase object already consumed");
  }
}

std::string_view to_string(Variant v) {
  return v == Variant::kKuperberg ? "kuperberg" : "regev";
}

Variant parse_variant(std::string_view s) {
  if (s == "kuperberg") return Variant::kKuperberg;
  if (s == "regev") return Variant::kRegev;
  throw ParameterError("unknown variant '" + std::string(s) + "'");
}

void SieveParams::validate() const {
  if (n < 2 || n > kMaxExponent) {
    throw ParameterError("n=" + std::to_string(n) + " outside [2, 62]");
  }
  if (k < 1) throw ParameterError("k must be >= 1");
  if (max_retries < 0) throw ParameterError("max_retries must be >= 0");
  if (variant == Variant::kKuperberg) {
    if (n != k * k + 1) {
      throw ParameterError("kuperberg requires n = k^2 + 1, got n=" + std::to_string(n) +
                           ", k=" + std::to_string(k));
    }
  } else {
    if (l < 1) throw ParameterError("l must be >= 1");
    if (n != 1 + k * l) {
      throw ParameterError("regev requires n = 1 + k*l, got n=" + std::to_string(n) +
                           ", k=" + std::to_string(k) + ", l=" + std::to_string(l));
    }
  }
}

SieveParams SieveParams::kuperberg(int n, int k) {
  SieveParams p;
  p.n = n;
  p.variant = Variant::kKuperberg;
  p.k = k;
  p.l = k;
  p.validate();
  return p;
}

SieveParams SieveParams::regev(int n, int k, int l) {
  SieveParams p;
  p.n = n;
  p.variant = Variant::kRegev;
  p.k = k;
  p.l = l;
  p.validate();
  return p;
}

std::string_view to_string(CombineTag tag) {
  switch (tag) {
    case CombineTag::kSuccess:
      return "success";
    case CombineTag::kParityFail:
      return "parity_fail";
    case CombineTag::kMTooSmall:
      return "m_too_small";
    case CombineTag::kMTooLarge:
      return "m_too_large";
    case CombineTag::kProjectionFail:
      return "projection_fail";
  }
  return "unknown";
}

void TrialReport::merge(const TrialReport& other) {
  oracle_queries += other.oracle_queries;
  fresh_objects += other.fresh_objects;
  const auto widen = [](std::vector<std::uint64_t>& into, const std::vector<std::uint64_t>& from) {
    if (into.size() < from.size()) into.resize(from.size(), 0);
    for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
  };
  widen(combines_attempted_per_stage, other.combines_attempted_per_stage);
  widen(combines_succeeded_per_stage, other.combines_succeeded_per_stage);
  peak_live_objects = std::max(peak_live_objects, other.peak_live_objects);
  live_at_end += other.live_at_end;
  destroyed_in_failed_combines += other.destroyed_in_failed_combines;
  net_consumed_in_successful_combines += other.net_consumed_in_successful_combines;
  final_label_zero_discards += other.final_label_zero_discards;
  final_outputs += other.final_outputs;
  budget += other.budget;
  succeeded = succeeded || other.succeeded;
  wall_time += other.wall_time;
}

bool TrialReport::conserves_objects() const {
  if (combines_succeeded_per_stage.size() != combines_attempted_per_stage.size()) return false;
  for (std::size_t i = 0; i < combines_attempted_per_stage.size(); ++i) {
    if (combines_succeeded_per_stage.at(i) > combines_attempted_per_stage[i]) return false;
  }
  return fresh_objects == live_at_end + destroyed_in_failed_combines +
                              net_consumed_in_successful_combines + final_label_zero_discards;
}

}  // namespace dhsp
