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

#include <array>
#include <optional>
#include <vector>

#include "lueq/pauli.hpp"
#include "lueq/spectral.hpp"
#include "lueq/tolerances.hpp"
#include "lueq/types.hpp"

namespace lueq {

/// The per-qubit factor relating two reference forms: a diagonal phase for a
/// qubit whose marginal is not maximally mixed, a general SU(2) element otherwise.
class ResidualUnitary {
 public:
  enum class Kind { kDiagonalPhase, kGeneral };

  static ResidualUnitary phase(double omega);
  static ResidualUnitary general(const SU2Params& params);
  static ResidualUnitary identity(bool strong);

  Kind kind() const noexcept { return kind_; }
  /// Angle in [0, 2 pi); meaningful for kDiagonalPhase.
  double omega() const noexcept { return omega_; }
  const SU2Params& params() const noexcept { return params_; }

  Mat2 matrix() const;
  Rotation3 rotation() const;

 private:
  Kind kind_ = Kind::kDiagonalPhase;
  double omega_ = 0.0;
  SU2Params params_;
};

using Matrix3 = Eigen::Matrix3d;

/// 3x3x3 correlation tensor, t[a][b][c] for axes a, b, c in {1,2,3} shifted to 0.
using Tensor3 = std::array<std::array<std::array<double, 3>, 3>, 3>;

/// Read access to the order-1, -2 and -3 correlation coefficients of a
/// coefficient vector.
class Correlations {
 public:
  explicit Correlations(const PauliCoefficients& coeffs) : coeffs_(&coeffs) {}

  int num_qubits() const noexcept { return coeffs_->num_qubits(); }
  Vec3 local(int i) const;
  /// (a, b) -> r with axis a+1 on qubit i and b+1 on qubit j.
  Matrix3 pair(int i, int j) const;
  Tensor3 triple(int i, int j, int k) const;
  const PauliCoefficients& coefficients() const noexcept { return *coeffs_; }

 private:
  const PauliCoefficients* coeffs_;
};

/// Order-2 coefficients between qubits i and j of both reference forms.
struct CorrelationBlock {
  int qubit_i = 0;
  int qubit_j = 1;
  Matrix3 ref = Matrix3::Zero();        // rows: axes of qubit_i, cols: axes of qubit_j
  Matrix3 ref_prime = Matrix3::Zero();

  static CorrelationBlock extract(const PauliCoefficients& ref, const PauliCoefficients& ref_prime,
                                  int i, int j);

  /// The block with rows indexed by the axes of \p target (which must be one of
  /// the two qubits).
  Matrix3 oriented(int target, bool prime) const;
  int partner_of(int target) const;
};

/// Pairwise closed form: omega of \p target from its (1,3)/(2,3)
/// slices against the partner. Returns omega in [0, pi).
/// Throws kVanishingDenominator or kInconsistentCoefficients.
double solve_omega_pairwise(const CorrelationBlock& block, int target, const Tolerances& tol);

/// The 4x4 coefficient matrix of the linear system in
/// x = (c_i c_j, c_i s_j, s_i c_j, s_i s_j), c = cos 2 omega, s = sin 2 omega,
/// acting on the (1,2) x (1,2) sub-block with rows oriented to \p target.
Eigen::Matrix4d phase_system_matrix(const CorrelationBlock& block, int target);
Eigen::Vector4d phase_system_rhs(const CorrelationBlock& block, int target);

struct PhasePairSolution {
  enum class Family {
    kUnique,           // determined up to the joint shift by pi/2
    kSumFixed,         // only omega_i + omega_j is determined
    kDifferenceFixed,  // only omega_i - omega_j is determined
    kPartnerGiven,     // partner omega was supplied by the caller
  };
  double omega_target = 0.0;
  double omega_partner = 0.0;
  Family family = Family::kUnique;
  /// The other member of a two-fold ambiguity (both angles shifted by pi/2).
  std::optional<std::array<double, 2>> alternative;
  double residual = 0.0;  // ||M x - r'||
};

/// Solves the (1,2)-block system for the angle pair, or for the target angle
/// alone when \p known_partner_omega is set. Rank-deficient systems return the
/// family member with the smallest target angle. Throws kAllCoefficientsVanish
/// or kNoConsistentSolution.
PhasePairSolution solve_omega_linear_system(const CorrelationBlock& block, int target,
                                            const Tolerances& tol,
                                            std::optional<double> known_partner_omega = {});

/// Rotation of a maximally mixed qubit from its slice against a
/// partner with a non-maximally-mixed marginal. The induced rotation maps the
/// slice of the first reference form onto the slice of the second.
/// Throws kVanishingSlice or kNormMismatch.
SU2Params solve_rotation_for_strong_qubit(const CorrelationBlock& block, int strong,
                                          const Tolerances& tol);

struct StrongPairSolution {
  SU2Params first;   // qubit_i of the block
  SU2Params second;  // qubit_j of the block
  double residual = 0.0;
};

/// Both qubits maximally mixed: finds rotations R_i, R_j with
/// R_i C R_j^T = C' by a seeded 16^3 start grid over the first rotation (the
/// second fitted in closed form at every start) followed by damped Newton
/// refinement of all six angles. Throws kAllCoefficientsVanish or kNoSolutionFound.
StrongPairSolution solve_all_strong(const CorrelationBlock& block, const Tolerances& tol);

using PartialResiduals = std::vector<std::optional<ResidualUnitary>>;

/// Best rotation for one qubit given already solved qubits, using every order-2
/// block and order-3 tensor that pairs it with solved qubits. \p strong selects
/// a full SO(3) fit, otherwise a rotation about z. Returns nothing when every
/// usable coefficient vanishes; \p rank receives the rank of the constraint set.
std::optional<ResidualUnitary> anchor_qubit(const Correlations& ref, const Correlations& ref_prime,
                                            int qubit, bool strong,
                                            const PartialResiduals& solved, int max_order,
                                            const Tolerances& tol, int* rank = nullptr);

/// For every unsolved qubit whose order-2 blocks all vanish, solves it from
/// order-3 tensors against solved qubits (or jointly when nothing is solved).
/// Qubits with a nonvanishing order-2 block are left untouched. A qubit whose
/// residual leaves both reference forms unchanged is set to the identity.
/// Throws kOrderLimitExceeded when a qubit stays undetermined through order 3.
PartialResiduals escalate_order(const PauliCoefficients& ref, const PauliCoefficients& ref_prime,
                                const std::vector<bool>& strong, PartialResiduals solved,
                                const Tolerances& tol);

/// True when every coefficient on which the residual of \p qubit can act
/// vanishes in both coefficient sets, so any residual is admissible.
bool qubit_is_free(const PauliCoefficients& ref, const PauliCoefficients& ref_prime, int qubit,
                   bool strong, double coef_tol);

/// Frobenius norm of the violation of T' = (R_1 (x) ... ) T over all
/// correlation tensors of order 1..max_order.
double correlation_residual(const Correlations& ref, const Correlations& ref_prime,
                            const std::vector<Rotation3>& rotations, int max_order);

/// Damped Newton (Levenberg-Marquardt) polish of the residuals flagged in
/// \p free_qubits against the correlation equations through \p max_order.
/// Strong qubits get three parameters, the others one angle about z.
/// Returns the final correlation residual.
double refine_residuals(const Correlations& ref, const Correlations& ref_prime,
                        const std::vector<bool>& strong, const std::vector<bool>& free_qubits,
                        std::vector<ResidualUnitary>& residuals, int max_order, int max_steps,
                        double target);

}  // namespace lueq
