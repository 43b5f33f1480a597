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

#include "lueq/tolerances.hpp"
#include "lueq/types.hpp"

namespace lueq {

/// A validated n-qubit density matrix: Hermitian, unit trace and positive
/// semidefinite within the configured tolerances. Immutable after construction.
class MultiQubitState {
 public:
  /// Validates \p matrix and throws lueq::Error naming the violated invariant.
  static MultiQubitState from_matrix(ComplexMatrix matrix, const Tolerances& tol = {});

  /// Builds |psi><psi| after checking the amplitude norm.
  static MultiQubitState from_amplitudes(const ComplexVector& amplitudes,
                                         const Tolerances& tol = {});

  /// Wraps a matrix produced by an operation that preserves the state
  /// invariants (partial trace, local conjugation). Only the shape is checked.
  static MultiQubitState assume_valid(ComplexMatrix matrix);

  int num_qubits() const noexcept { return n_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

  double purity() const;

 private:
  MultiQubitState(int n, ComplexMatrix matrix) : n_(n), matrix_(std::move(matrix)) {}

  int n_;
  ComplexMatrix matrix_;
};

/// Number of qubits for a 2^n dimension, or -1 when \p dim is not a power of two.
int qubits_for_dim(Eigen::Index dim);

}  // namespace lueq
