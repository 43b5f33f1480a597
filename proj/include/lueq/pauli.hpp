// Copyright 2026 The lueq Authors
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
#include <map>
#include <string>
#include <vector>

#include "lueq/state.hpp"
#include "lueq/tolerances.hpp"
#include "lueq/types.hpp"

namespace lueq {

/// A multi-index (alpha_1, ..., alpha_n) over {0, 1, 2, 3}, one Pauli factor per
/// qubit (0 is the identity). Qubit 0 is the most significant base-4 digit of
/// the flat offset, matching the nesting of the tensor product.
class PauliIndex {
 public:
  PauliIndex() = default;
  explicit PauliIndex(std::vector<std::uint8_t> alphas);
  static PauliIndex from_offset(std::size_t offset, int n);

  int num_qubits() const noexcept { return static_cast<int>(alphas_.size()); }
  std::uint8_t operator[](int qubit) const { return alphas_.at(static_cast<std::size_t>(qubit)); }
  const std::vector<std::uint8_t>& alphas() const noexcept { return alphas_; }
  std::size_t offset() const noexcept;

  /// e.g. "0312".
  std::string to_string() const;

  friend bool operator==(const PauliIndex&, const PauliIndex&) = default;

 private:
  std::vector<std::uint8_t> alphas_;
};

/// Generalized Bloch representation: rho = sum_alpha r_alpha sigma_alpha with
/// r_alpha = Tr(sigma_alpha rho) / 2^n, stored densely in offset order.
class PauliCoefficients {
 public:
  PauliCoefficients(int n, std::vector<double> r);

  int num_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return r_.size(); }
  double operator[](std::size_t offset) const { return r_[offset]; }
  double operator[](const PauliIndex& idx) const { return r_[idx.offset()]; }
  const std::vector<double>& values() const noexcept { return r_; }

 private:
  int n_;
  std::vector<double> r_;
};

/// The 2^n x 2^n tensor product of single-qubit Pauli matrices.
ComplexMatrix pauli_matrix(const PauliIndex& idx);

/// The 2x2 matrix sigma_axis for axis in {0, 1, 2, 3}.
Mat2 single_pauli(int axis);

/// Tr(sigma_alpha * M) computed without forming sigma_alpha; O(2^n).
Complex pauli_trace(const ComplexMatrix& m, int n, const PauliIndex& idx);

PauliCoefficients to_pauli_coefficients(const MultiQubitState& state, const Tolerances& tol = {});

/// sum_alpha r_alpha sigma_alpha without validation.
ComplexMatrix matrix_from_coefficients(int n, const std::vector<double>& r);

/// Rebuilds the density matrix and validates it; throws kNotAState if the
/// coefficients do not describe a positive semidefinite operator.
MultiQubitState from_pauli_coefficients(const PauliCoefficients& coeffs,
                                        const Tolerances& tol = {});

/// Bloch vector (Tr sigma_1 rho, Tr sigma_2 rho, Tr sigma_3 rho) of a 1-qubit state.
Vec3 bloch_vector(const MultiQubitState& state);

/// r at the index carrying \p placements (qubit -> axis in {1,2,3}) and the
/// identity on every other qubit. Qubits are 0-based.
double correlation_coefficient(const PauliCoefficients& coeffs,
                               const std::map<int, int>& placements);

}  // namespace lueq
