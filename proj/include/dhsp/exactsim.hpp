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

// Dense amplitude-vector simulation of the sampling routine and of both
// combine operations, at sizes small enough to hold every amplitude. Used as
// ground truth for the label-level shortcuts in oracle.hpp and combine.hpp,
// so nothing here calls into those modules' sampling code.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dhsp/core.hpp"
#include "dhsp/rng.hpp"

namespace dhsp::exact {

inline constexpr int kMaxCosetExponent = 12;
inline constexpr int kMaxBlockQubits = 16;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

/// 2 pi * (numerator mod 2^n) / 2^n, in [0, 2 pi).
template <typename Scalar>
Scalar phase_angle(std::uint64_t numerator, int n) {
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  return Scalar(2) * std::numbers::pi_v<Scalar> * static_cast<Scalar>(numerator & mask) /
         std::ldexp(Scalar(1), n);
}

/// exp(2 pi i * numerator / 2^n).
template <typename Scalar>
std::complex<Scalar> root_of_unity(std::uint64_t numerator, int n) {
  return std::polar(Scalar(1), phase_angle<Scalar>(numerator, n));
}

/// Relative phase of `a1` against `a0`, in [0, 2 pi).
template <typename Scalar>
Scalar relative_phase(std::complex<Scalar> a0, std::complex<Scalar> a1) {
  Scalar theta = std::arg(a1 / a0);
  if (theta < 0) theta += Scalar(2) * std::numbers::pi_v<Scalar>;
  return theta;
}

/// Distance between two angles on the circle.
template <typename Scalar>
Scalar angle_distance(Scalar a, Scalar b) {
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar d = std::fmod(std::abs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

/// Amplitudes over an explicit, distinct set of basis labels.
template <typename Scalar = double>
struct AmplitudeState {
  std::vector<std::uint64_t> basis;
  ComplexVector<Scalar> amplitudes;

  Scalar norm_squared() const { return amplitudes.squaredNorm(); }
  void normalize() { amplitudes.normalize(); }
  bool is_normalized(Scalar tol = Scalar(1e-9)) const {
    return std::abs(norm_squared() - Scalar(1)) <= tol;
  }

  /// |0> + e^{i theta}|1>, normalized.
  static AmplitudeState phase_qubit(Scalar theta) {
    AmplitudeState s;
    s.basis = {0, 1};
    s.amplitudes.resize(2);
    s.amplitudes << std::complex<Scalar>(1), std::polar(Scalar(1), theta);
    s.normalize();
    return s;
  }
};

/// |<a|b>| over the union of both bases; 1 means equal up to global phase.
template <typename Scalar>
Scalar overlap(const AmplitudeState<Scalar>& a, const AmplitudeState<Scalar>& b) {
  std::map<std::uint64_t, std::complex<Scalar>> lhs;
  for (std::size_t i = 0; i < a.basis.size(); ++i) lhs[a.basis[i]] = a.amplitudes(static_cast<Eigen::Index>(i));
  std::complex<Scalar> acc(0);
  for (std::size_t i = 0; i < b.basis.size(); ++i) {
    auto it = lhs.find(b.basis[i]);
    if (it != lhs.end()) acc += std::conj(it->second) * b.amplitudes(static_cast<Eigen::Index>(i));
  }
  return std::abs(acc);
}

/// N x N unitary with entry (y, x) = e^{2 pi i x y / N} / sqrt(N).
template <typename Scalar = double>
ComplexMatrix<Scalar> fourier_matrix(int n) {
  if (n < 0 || n > kMaxCosetExponent) throw ParameterError("fourier_matrix: n outside [0, 12]");
  const Eigen::Index size = Eigen::Index{1} << n;
  const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(size));
  ComplexMatrix<Scalar> f(size, size);
  for (Eigen::Index y = 0; y < size; ++y) {
    for (Eigen::Index x = 0; x < size; ++x) {
      f(y, x) = scale * root_of_unity<Scalar>(static_cast<std::uint64_t>(x * y), n);
    }
  }
  return f;
}

/// Born-rule outcome probabilities of a one-qubit state in the Hadamard basis.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> hadamard_distribution(const AmplitudeState<Scalar>& qubit) {
  if (qubit.amplitudes.size() != 2) throw ParameterError("hadamard_distribution: not a qubit");
  Eigen::Matrix<std::complex<Scalar>, 2, 2> h;
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  h << r, r, r, -r;
  const Eigen::Matrix<std::complex<Scalar>, 2, 1> out = h * qubit.amplitudes;
  return out.cwiseAbs2();
}

namespace detail {

template <typename Scalar>
std::size_t sample_index(std::span<const Scalar> weights, Rng& rng) {
  Scalar total = 0;
  for (Scalar w : weights) total += w;
  Scalar u = static_cast<Scalar>(rng.uniform01()) * total;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) continue;
    last = i;
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return last;
}

// The dihedral register |b, x> (index b*N + x) with the function register
// folded into the basis label: f(0,x) = x, f(1,x) = x - d.
template <typename Scalar>
struct DihedralState {
  int n;
  std::uint64_t d;
  ComplexVector<Scalar> amps;  // 2N entries

  std::uint64_t size() const { return std::uint64_t{1} << n; }
  std::uint64_t f(std::uint64_t index) const {
    const std::uint64_t b = index >> n;
    const std::uint64_t x = index & (size() - 1);
    return b == 0 ? x : (x - d) & (size() - 1);
  }
};

template <typename Scalar>
DihedralState<Scalar> uniform_dihedral(int n, std::uint64_t d) {
  if (n < 1 || n > kMaxCosetExponent) {
    throw ParameterError("exact coset routine limited to 1 <= n <= 12, got " + std::to_string(n));
  }
  if (d >> n != 0) throw ParameterError("secret exceeds 2^n");
  DihedralState<Scalar> s{n, d, {}};
  const Eigen::Index dim = Eigen::Index{2} << n;
  s.amps = ComplexVector<Scalar>::Constant(dim, std::complex<Scalar>(1) / std::sqrt(static_cast<Scalar>(dim)));
  return s;
}

// P(function register = v) for every v.
template <typename Scalar>
std::vector<Scalar> function_marginal(const DihedralState<Scalar>& s) {
  std::vector<Scalar> p(s.size(), Scalar(0));
  for (Eigen::Index i = 0; i < s.amps.size(); ++i) p[s.f(static_cast<std::uint64_t>(i))] += std::norm(s.amps(i));
  return p;
}

template <typename Scalar>
void collapse_function(DihedralState<Scalar>& s, std::uint64_t v) {
  for (Eigen::Index i = 0; i < s.amps.size(); ++i) {
    if (s.f(static_cast<std::uint64_t>(i)) != v) s.amps(i) = 0;
  }
  s.amps.normalize();
}

// Fourier transform of the x register for each b, skipping zero amplitudes.
template <typename Scalar>
void fourier_second_register(DihedralState<Scalar>& s) {
  const std::uint64_t size = s.size();
  const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(size));
  ComplexVector<Scalar> out = ComplexVector<Scalar>::Zero(s.amps.size());
  for (std::uint64_t b = 0; b < 2; ++b) {
    for (std::uint64_t x = 0; x < size; ++x) {
      const std::complex<Scalar> a = s.amps(static_cast<Eigen::Index>(b * size + x));
      if (a == std::complex<Scalar>(0)) continue;
      for (std::uint64_t y = 0; y < size; ++y) {
        out(static_cast<Eigen::Index>(b * size + y)) += a * scale * root_of_unity<Scalar>(x * y, s.n);
      }
    }
  }
  s.amps = std::move(out);
}

template <typename Scalar>
std::vector<Scalar> y_marginal(const DihedralState<Scalar>& s) {
  std::vector<Scalar> p(s.size(), Scalar(0));
  for (std::uint64_t y = 0; y < s.size(); ++y) {
    p[y] = std::norm(s.amps(static_cast<Eigen::Index>(y))) +
           std::norm(s.amps(static_cast<Eigen::Index>(s.size() + y)));
  }
  return p;
}

}  // namespace detail

template <typename Scalar = double>
struct CosetSample {
  std::uint64_t function_value;
  std::uint64_t y;
  Scalar theta;                   // relative phase of the residual qubit
  AmplitudeState<Scalar> qubit;   // normalized |0> + e^{i theta}|1>
  Scalar max_norm_error;          // worst |norm^2 - 1| over the unitary steps
};

/// The full sampling routine: uniform superposition over D_N, oracle,
/// function-register measurement, Fourier transform, y measurement.
template <typename Scalar = double>
CosetSample<Scalar> coset_state_routine(int n, std::uint64_t d, Rng& rng) {
  auto s = detail::uniform_dihedral<Scalar>(n, d);
  Scalar norm_error = std::abs(s.amps.squaredNorm() - Scalar(1));

  const auto pf = detail::function_marginal(s);
  const std::uint64_t v = detail::sample_index<Scalar>(pf, rng);
  detail::collapse_function(s, v);

  detail::fourier_second_register(s);
  norm_error = std::max(norm_error, std::abs(s.amps.squaredNorm() - Scalar(1)));

  const auto py = detail::y_marginal(s);
  const std::uint64_t y = detail::sample_index<Scalar>(py, rng);

  AmplitudeState<Scalar> qubit;
  qubit.basis = {0, 1};
  qubit.amplitudes.resize(2);
  qubit.amplitudes << s.amps(static_cast<Eigen::Index>(y)),
      s.amps(static_cast<Eigen::Index>(s.size() + y));
  qubit.normalize();
  const Scalar theta = relative_phase(qubit.amplitudes(0), qubit.amplitudes(1));
  return {v, y, theta, std::move(qubit), norm_error};
}

/// Exact marginal distribution of the measured y, averaged over the
/// function-register outcome.
template <typename Scalar = double>
std::vector<Scalar> coset_y_marginal(int n, std::uint64_t d) {
  const auto initial = detail::uniform_dihedral<Scalar>(n, d);
  const auto pf = detail::function_marginal(initial);
  std::vector<Scalar> total(initial.size(), Scalar(0));
  for (std::uint64_t v = 0; v < pf.size(); ++v) {
    if (pf[v] <= 0) continue;
    auto s = initial;
    detail::collapse_function(s, v);
    detail::fourier_second_register(s);
    const auto py = detail::y_marginal(s);
    for (std::size_t y = 0; y < py.size(); ++y) total[y] += pf[v] * py[y];
  }
  return total;
}

template <typename Scalar = double>
struct PairCombineResult {
  bool odd;                          // sampled parity outcome
  Scalar odd_probability;            // Born rule, from amplitudes
  AmplitudeState<Scalar> odd_state;  // |10> -> |0>, |01> -> |1>
  AmplitudeState<Scalar> even_state; // |00> -> |0>, |11> -> |1>
  AmplitudeState<Scalar> two_qubit;  // the tensor state before measuring
};

/// Parity measurement on (|0> + e^{i t1}|1>) (x) (|0> + e^{i t2}|1>), with
/// t_j = 2 pi d y_j / N. Basis index is 2*q1 + q2.
template <typename Scalar = double>
PairCombineResult<Scalar> exact_pair_combine(std::uint64_t y1, std::uint64_t y2, int n,
                                             std::uint64_t d, Rng& rng) {
  if (n < 1 || n > kMaxCosetExponent) throw ParameterError("exact_pair_combine: n outside [1, 12]");
  const auto q1 = AmplitudeState<Scalar>::phase_qubit(phase_angle<Scalar>(d * y1, n));
  const auto q2 = AmplitudeState<Scalar>::phase_qubit(phase_angle<Scalar>(d * y2, n));

  AmplitudeState<Scalar> joint;
  joint.basis = {0, 1, 2, 3};
  joint.amplitudes.resize(4);
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) joint.amplitudes(2 * a + b) = q1.amplitudes(a) * q2.amplitudes(b);
  }

  Eigen::Matrix<Scalar, 4, 1> odd_projector;
  odd_projector << 0, 1, 1, 0;
  const ComplexVector<Scalar> odd_part = joint.amplitudes.cwiseProduct(odd_projector.template cast<std::complex<Scalar>>());
  const ComplexVector<Scalar> even_part = joint.amplitudes - odd_part;
  const Scalar p_odd = odd_part.squaredNorm();

  PairCombineResult<Scalar> r;
  r.odd_probability = p_odd;
  r.odd = rng.uniform01() < static_cast<double>(p_odd);
  r.odd_state.basis = {0, 1};
  r.odd_state.amplitudes.resize(2);
  r.odd_state.amplitudes << odd_part(2), odd_part(1);
  r.odd_state.normalize();
  r.even_state.basis = {0, 1};
  r.even_state.amplitudes.resize(2);
  r.even_state.amplitudes << even_part(0), even_part(3);
  r.even_state.normalize();
  r.two_qubit = std::move(joint);
  return r;
}

template <typename Scalar = double>
struct BlockBranch {
  std::uint64_t z;
  Scalar probability;               // from amplitudes
  AmplitudeState<Scalar> residual;  // normalized m-term state, basis = bitstrings
  Scalar projection_probability;    // onto the two smallest bitstrings
  std::optional<Scalar> projected_phase;  // phase of b^2 against b^1
};

template <typename Scalar = double>
struct BlockCombineResult {
  std::vector<BlockBranch<Scalar>> branches;  // ascending z, nonzero probability only
  std::uint64_t sampled_z;
  Scalar max_norm_error;

  const BlockBranch<Scalar>* branch(std::uint64_t z) const {
    for (const auto& b : branches) {
      if (b.z == z) return &b;
    }
    return nullptr;
  }
};

/// The tensor product of |y| phase qubits with the register <b, y> mod 2^t
/// measured. Bitstrings use the combine module's encoding (b_1 most
/// significant), but sums are accumulated here bit by bit.
template <typename Scalar = double>
BlockCombineResult<Scalar> exact_block_combine(std::span<const std::uint64_t> y, int n,
                                               std::uint64_t d, int t, Rng& rng) {
  const int len = static_cast<int>(y.size());
  if (len < 1 || len > kMaxBlockQubits) throw ParameterError("exact_block_combine: 1..16 labels");
  if (n < 1 || n > kMaxExponent || t < 0 || t > n) throw ParameterError("exact_block_combine: bad n or t");
  const std::uint64_t dim = std::uint64_t{1} << len;
  const std::uint64_t n_mask = (std::uint64_t{1} << n) - 1;
  const std::uint64_t t_mask = (std::uint64_t{1} << t) - 1;

  std::vector<std::uint64_t> full(dim);
  AmplitudeState<Scalar> state;
  state.basis.resize(dim);
  state.amplitudes.resize(static_cast<Eigen::Index>(dim));
  const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    std::uint64_t s = 0;
    for (int j = 0; j < len; ++j) {
      if ((b >> (len - 1 - j)) & 1U) s = (s + y[static_cast<std::size_t>(j)]) & n_mask;
    }
    full[b] = s;
    state.basis[b] = b;
    state.amplitudes(static_cast<Eigen::Index>(b)) = scale * root_of_unity<Scalar>(d * s, n);
  }

  BlockCombineResult<Scalar> r;
  r.max_norm_error = std::abs(state.norm_squared() - Scalar(1));

  std::map<std::uint64_t, std::vector<std::uint64_t>> by_z;
  for (std::uint64_t b = 0; b < dim; ++b) by_z[full[b] & t_mask].push_back(b);

  std::vector<Scalar> weights;
  for (const auto& [z, members] : by_z) {
    BlockBranch<Scalar> br;
    br.z = z;
    br.residual.basis = members;
    br.residual.amplitudes.resize(static_cast<Eigen::Index>(members.size()));
    for (std::size_t i = 0; i < members.size(); ++i) {
      br.residual.amplitudes(static_cast<Eigen::Index>(i)) = state.amplitudes(static_cast<Eigen::Index>(members[i]));
    }
    br.probability = br.residual.norm_squared();
    br.residual.normalize();
    r.max_norm_error = std::max(r.max_norm_error, std::abs(br.residual.norm_squared() - Scalar(1)));
    if (members.size() >= 2) {
      const auto& a = br.residual.amplitudes;
      br.projection_probability = std::norm(a(0)) + std::norm(a(1));
      br.projected_phase = relative_phase(a(0), a(1));
    } else {
      br.projection_probability = 0;
    }
    weights.push_back(br.probability);
    r.branches.push_back(std::move(br));
  }
  r.sampled_z = r.branches[detail::sample_index<Scalar>(weights, rng)].z;
  return r;
}

}  // namespace dhsp::exact
