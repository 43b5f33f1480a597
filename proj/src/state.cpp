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
#include "lueq/state.hpp"

#include <cmath>
#include <sstream>

#include "lueq/error.hpp"

namespace lueq {

int qubits_for_dim(Eigen::Index dim) {
  if (dim < 2) return -1;
  int n = 0;
  Eigen::Index d = dim;
  while (d > 1) {
    if (d % 2 != 0) return -1;
    d /= 2;
    ++n;
  }
  return n;
}

namespace {

int checked_qubits(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kWrongArity, "density matrix must be square");
  }
  const int n = qubits_for_dim(m.rows());
  if (n < 1) {
    throw Error(ErrorCode::kWrongArity,
                "dimension " + std::to_string(m.rows()) + " is not 2^n with n >= 1");
  }
  return n;
}

}  // namespace

MultiQubitState MultiQubitState::from_matrix(ComplexMatrix matrix, const Tolerances& tol) {
  const int n = checked_qubits(matrix);

  const double norm = matrix.norm();
  const double asym = (matrix - matrix.adjoint()).norm();
  if (asym > tol.herm * norm) {
    std::ostringstream os;
    os << "Hermitian invariant violated: ||M - M^dag||_F = " << asym;
    throw Error(ErrorCode::kNonHermitianInput, os.str());
  }

  const Complex tr = matrix.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol.trace) {
    std::ostringstream os;
    os << "unit-trace invariant violated: Tr M = " << tr.real();
    if (tr.imag() != 0.0) os << (tr.imag() > 0 ? " + " : " - ") << std::abs(tr.imag()) << "i";
    throw Error(ErrorCode::kNotUnitTrace, os.str());
  }

  // Symmetrize before the eigenvalue check so that the imaginary residue
  // admitted above does not leak into the spectrum.
  ComplexMatrix h = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol.psd) {
    std::ostringstream os;
    os << "positive-semidefinite invariant violated: minimum eigenvalue " << min_eig;
    throw Error(ErrorCode::kNotAState, os.str());
  }
  return MultiQubitState(n, std::move(h));
}

MultiQubitState MultiQubitState::from_amplitudes(const ComplexVector& amplitudes,
                                                 const Tolerances& tol) {
  const int n = qubits_for_dim(amplitudes.size());
  if (n < 1) {
    throw Error(ErrorCode::kWrongArity, "amplitude count " + std::to_string(amplitudes.size()) +
                                            " is not 2^n with n >= 1");
  }
  const double norm2 = amplitudes.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol.trace) {
    std::ostringstream os;
    os << "normalization invariant violated: <psi|psi> = " << norm2;
    throw Error(ErrorCode::kNotNormalized, os.str());
  }
  return MultiQubitState(n, amplitudes * amplitudes.adjoint());
}

MultiQubitState MultiQubitState::assume_valid(ComplexMatrix matrix) {
  const int n = checked_qubits(matrix);
  return MultiQubitState(n, std::move(matrix));
}

double MultiQubitState::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return matrix_.squaredNorm();
}

}  // namespace lueq
