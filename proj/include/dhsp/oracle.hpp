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
#include <memory>
#include <optional>
#include <vector>

#include "dhsp/core.hpp"
#include "dhsp/rng.hpp"

namespace dhsp {

/// (b, x) in D_N: b = 0 is the rotation by x, b = 1 the reflection (1, x).
struct GroupElement {
  int b;
  std::uint64_t x;
};

/// Probability that a Hadamard-basis measurement of |0> + e^{2 pi i d y/N}|1>
/// yields 1, i.e. sin^2(pi d y / N).
double hadamard_one_probability(std::uint64_t d, const Label& y);

/// Black box f on D_N hiding the reflection subgroup {(0,0), (1,d)}.
///
/// The root instantiation is f(0,x) = x, f(1,x) = x - d mod N. Restrictions
/// are views onto the same root: a level-t oracle maps (a, x) through
/// x -> 2x + a*bit for each recorded bit, innermost last, and then queries
/// the root. Copies share the root (counter, secret and measurement stream),
/// so a HiddenOracle must stay on one thread at a time.
class HiddenOracle {
 public:
  /// `d` absent draws the secret uniformly from Rng(seed).child(kSecretStream).
  static HiddenOracle create(int n, std::optional<std::uint64_t> d, std::uint64_t seed);

  int n() const { return n_; }
  std::uint64_t modulus() const { return std::uint64_t{1} << n_; }

  /// f(g) through any restriction wrappers; counts one query.
  std::uint64_t query(GroupElement g);

  /// Coset-state sampling routine: one oracle call, returns the phase object
  /// for a uniformly distributed y.
  PhaseObject sample_phase_qubit();

  /// Consumes `obj` and measures it in the Hadamard basis.
  int measure_hadamard(PhaseObject obj);

  /// Oracle over D_{N/2} with g(a, x) = f(a, 2x + a*bit).
  HiddenOracle restrict_to(int bit) const;

  /// Queries made against the root, across every view of it.
  std::uint64_t query_count() const;

  /// Restriction bits applied so far, first-applied first.
  const std::vector<int>& restriction_bits() const { return bits_; }

  /// The root secret, for checking results; no algorithm reads it.
  std::uint64_t ground_truth() const;

 private:
  struct Root;

  HiddenOracle(std::shared_ptr<Root> root, int n, std::vector<int> bits);

  std::uint64_t lift(GroupElement g) const;
  // The secret hidden by this view as seen by the simulated physics. Throws
  // ContractError when a restriction bit disagreed with the secret, since
  // such a view no longer hides a reflection.
  std::uint64_t effective_secret() const;

  std::shared_ptr<Root> root_;
  int n_;
  std::vector<int> bits_;
};

}  // namespace dhsp
