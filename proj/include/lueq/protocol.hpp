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
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lueq/angle_solver.hpp"
#include "lueq/spectral.hpp"
#include "lueq/state.hpp"
#include "lueq/tolerances.hpp"

namespace lueq {

struct SpectrumMismatch {
  int qubit = 0;  // 0-based
  Diagonalization d;
  Diagonalization d_prime;
};

struct VerificationFailure {
  double residual = 0.0;
};

struct SolverEvidence {
  std::string description;
};

using Witness = std::variant<SpectrumMismatch, VerificationFailure, SolverEvidence>;

struct Equivalent {
  std::vector<Mat2> unitaries;  // rho' = (U_0 (x) ...) rho (U_0 (x) ...)^dag
  double residual = 0.0;        // relative Frobenius residual on the full states
};

struct NotEquivalent {
  Witness witness;
};

enum class UndecidedReason { kOrderLimitExceeded, kOracleDisabled };

struct Undecided {
  UndecidedReason reason = UndecidedReason::kOrderLimitExceeded;
};

using Verdict = std::variant<Equivalent, NotEquivalent, Undecided>;

enum class SymmetryClass { kWeak, kStrong };

struct QubitRecord {
  ComplexMatrix reduced;
  ComplexMatrix reduced_prime;
  Diagonalization diag;
  Diagonalization diag_prime;
  SymmetryClass symmetry = SymmetryClass::kWeak;
  std::optional<ResidualUnitary> residual;
  std::optional<int> partner;
  std::string method;
};

/// Diagnostic record of one protocol run.
struct PipelineTrace {
  std::vector<QubitRecord> qubits;
  std::optional<ComplexMatrix> reference;
  std::optional<ComplexMatrix> reference_prime;
  std::vector<std::string> log;
};

enum class OracleMode { kOff, kOn, kAuto };

struct DecideConfig {
  Tolerances tol;
  OracleMode oracle = OracleMode::kOff;
  int oracle_budget = 64;
  std::uint64_t seed = 0;
};

struct Decision {
  Verdict verdict;
  PipelineTrace trace;
};

/// Passes iff every qubit has the same marginal spectrum in both states.
std::optional<SpectrumMismatch> spectrum_gate(const MultiQubitState& rho,
                                              const MultiQubitState& rho_prime,
                                              const Tolerances& tol = {});

Decision decide_lu_equivalence(const MultiQubitState& rho, const MultiQubitState& rho_prime,
                               const DecideConfig& config = {});

/// ||rho'^(r) - (x) U_bar rho^(r) (x) U_bar^dag||_F, unthresholded.
double verify_equivalence(const MultiQubitState& ref, const MultiQubitState& ref_prime,
                          std::span<const ResidualUnitary> residuals);

/// (x) U_i rho (x) U_i^dag. Throws kArityMismatch or kNonUnitaryInput.
MultiQubitState apply_local_unitary(const MultiQubitState& rho, std::span<const Mat2> unitaries);

/// Determinant 1 and the first non-negligible entry (row-major, normally the
/// top-left one) with argument in (-pi/2, pi/2].
Mat2 normalize_global_phase(const Mat2& u);

bool is_equivalent(const Verdict& v);

}  // namespace lueq
