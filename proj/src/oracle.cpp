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

#include "dhsp/oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dhsp {

struct HiddenOracle::Root {
  int n;
  std::uint64_t d;
  std::uint64_t queries = 0;
  Rng rng;
};

double hadamard_one_probability(std::uint64_t d, const Label& y) {
  // d*y mod 2^n is exact under wrapping 64-bit multiplication.
  const std::uint64_t phase = (d * y.value()) & y.mask();
  const double s = std::sin(std::numbers::pi * static_cast<double>(phase) /
                            static_cast<double>(y.modulus()));
  return s * s;
}

HiddenOracle::HiddenOracle(std::shared_ptr<Root> root, int n, std::vector<int> bits)
    : root_(std::move(root)), n_(n), bits_(std::move(bits)) {}

HiddenOracle HiddenOracle::create(int n, std::optional<std::uint64_t> d, std::uint64_t seed) {
  if (n < 1 || n > kMaxExponent) {
    throw ParameterError("oracle exponent n=" + std::to_string(n) + " outside [1, 62]");
  }
  const Rng base(seed);
  std::uint64_t secret;
  if (d) {
    secret = *d;
    if (secret >> n != 0) {
      throw ParameterError("secret d=" + std::to_string(secret) + " not below 2^" +
                           std::to_string(n));
    }
  } else {
    secret = base.child(Rng::kSecretStream).bits(n);
  }
  auto root = std::make_shared<Root>(Root{n, secret, 0, base.child(Rng::kOracleStream)});
  return HiddenOracle(std::move(root), n, {});
}

std::uint64_t HiddenOracle::lift(GroupElement g) const {
  if ((g.b != 0 && g.b != 1) || g.x >= modulus()) {
    throw ParameterError("group element (" + std::to_string(g.b) + ", " + std::to_string(g.x) +
                         ") invalid for n=" + std::to_string(n_));
  }
  std::uint64_t x = g.x;
  for (auto it = bits_.rbegin(); it != bits_.rend(); ++it) {
    x = 2 * x + static_cast<std::uint64_t>(g.b * *it);
  }
  return x;
}

std::uint64_t HiddenOracle::query(GroupElement g) {
  const std::uint64_t x = lift(g);
  ++root_->queries;
  const std::uint64_t mask = (std::uint64_t{1} << root_->n) - 1;
  return g.b == 0 ? x : (x - root_->d) & mask;
}

PhaseObject HiddenOracle::sample_phase_qubit() {
  ++root_->queries;
  return PhaseObject(Label(root_->rng.bits(n_), n_));
}

std::uint64_t HiddenOracle::effective_secret() const {
  std::uint64_t d = root_->d;
  for (int bit : bits_) {
    if (static_cast<int>(d & 1) != bit) {
      throw ContractError("restricted oracle no longer hides a reflection: bit " +
                          std::to_string(bit) + " disagrees with the secret");
    }
    d >>= 1;
  }
  return d;
}

int HiddenOracle::measure_hadamard(PhaseObject obj) {
  require_live(obj, "measure_hadamard");
  if (obj.label().n() != n_) {
    throw ParameterError("measure_hadamard: object modulus does not match oracle");
  }
  const double p1 = hadamard_one_probability(effective_secret(), obj.label());
  return root_->rng.bernoulli(p1) ? 1 : 0;
}

HiddenOracle HiddenOracle::restrict_to(int bit) const {
  if (bit != 0 && bit != 1) throw ParameterError("restriction bit must be 0 or 1");
  if (n_ < 2) throw ParameterError("cannot restrict an oracle over D_2 further");
  std::vector<int> bits = bits_;
  bits.push_back(bit);
  return HiddenOracle(root_, n_ - 1, std::move(bits));
}

std::uint64_t HiddenOracle::query_count() const { return root_->queries; }

std::uint64_t HiddenOracle::ground_truth() const { return root_->d; }

}  // namespace dhsp
