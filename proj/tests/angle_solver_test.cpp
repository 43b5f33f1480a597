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
#include "lueq/angle_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lueq/error.hpp"
#include "lueq/oracle.hpp"
#include "lueq/protocol.hpp"
#include "lueq/reduction.hpp"
#include "lueq/reference_form.hpp"
#include "test_support.hpp"

namespace lueq {
namespace {

using testing::coefficient_state;

PauliCoefficients coeffs(const MultiQubitState& s) { return to_pauli_coefficients(s); }

MultiQubitState reference_of(const MultiQubitState& rho) {
  std::vector<Mat2> v;
  for (int q = 0; q < rho.num_qubits(); ++q) v.push_back(diagonalize_qubit(single_qubit_marginal(rho, q)).v);
  return reference_form(rho, v);
}

// Reference forms of the 5.2 pair.
struct MixedPair {
  PauliCoefficients ref = coeffs(reference_of(testing::mixed_example()));
  PauliCoefficients ref_prime = coeffs(reference_of(testing::mixed_example_prime()));
};

// Reference forms of the 5.1 pair.
struct PurePair {
  PauliCoefficients ref = coeffs(reference_of(testing::pure_example()));
  PauliCoefficients ref_prime = coeffs(reference_of(testing::pure_example_prime()));
};

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kParse;
}

TEST(ResidualUnitaryTest, PhaseMatrixAndRotation) {
  const ResidualUnitary r = ResidualUnitary::phase(0.7);
  EXPECT_EQ(r.kind(), ResidualUnitary::Kind::kDiagonalPhase);
  EXPECT_LE((r.matrix() - diagonal_phase(0.7)).norm(), 1e-15);
  EXPECT_LE((r.rotation() - induced_rotation(r.matrix())).norm(), 1e-14);
  EXPECT_NEAR(ResidualUnitary::phase(-0.5).omega(), 2 * kPi - 0.5, 1e-15);
}

TEST(CorrelationsTest, AgreeWithCoefficientLookups) {
  const auto rho = random_state(3, 2, 8);
  const PauliCoefficients c = coeffs(rho);
  const Correlations cr(c);
  for (int a = 0; a < 3; ++a) {
    EXPECT_EQ(cr.local(1)(a), correlation_coefficient(c, {{1, a + 1}}));
    for (int b = 0; b < 3; ++b) {
      EXPECT_EQ(cr.pair(2, 0)(a, b), correlation_coefficient(c, {{2, a + 1}, {0, b + 1}}));
      for (int d = 0; d < 3; ++d) {
        EXPECT_EQ(cr.triple(1, 2, 0)[a][b][d],
                  correlation_coefficient(c, {{1, a + 1}, {2, b + 1}, {0, d + 1}}));
      }
    }
  }
  const CorrelationBlock block = CorrelationBlock::extract(c, c, 0, 2);
  EXPECT_EQ(block.oriented(2, false), block.ref.transpose());
  EXPECT_EQ(block.partner_of(2), 0);
}

TEST(SolveOmegaPairwiseTest, MixedExampleFirstQubit) {
  const MixedPair p;
  const CorrelationBlock block = CorrelationBlock::extract(p.ref, p.ref_prime, 0, 1);
  const Matrix3 b = block.oriented(0, false);
  const Matrix3 bp = block.oriented(0, true);
  EXPECT_NEAR(b(0, 2), 49.0 / 18750, 1e-12);
  EXPECT_NEAR(bp(0, 2), 49.0 / 18750, 1e-12);
  EXPECT_NEAR(solve_omega_pairwise(block, 0, {}), 0.0, 1e-9);
}

TEST(SolveOmegaPairwiseTest, MixedExampleSecondQubit) {
  const MixedPair p;
  const CorrelationBlock block = CorrelationBlock::extract(p.ref, p.ref_prime, 0, 1);
  EXPECT_NEAR(block.oriented(1, false)(0, 2), 49.0 / 18750, 1e-12);
  EXPECT_NEAR(block.oriented(1, true)(0, 2), -49.0 / 18750, 1e-12);
  const double w = solve_omega_pairwise(block, 1, {});
  EXPECT_NEAR(std::cos(2 * w), -1.0, 1e-9);
  EXPECT_NEAR(w, kPi / 2, 1e-9);
}

TEST(SolveOmegaPairwiseTest, IdenticalSlicesGiveZero) {
  const PauliCoefficients c = coeffs(reference_of(random_state(2, 2, 3)));
  EXPECT_NEAR(solve_omega_pairwise(CorrelationBlock::extract(c, c, 0, 1), 0, {}), 0.0, 1e-12);
}

TEST(SolveOmegaPairwiseTest, RecoversForwardConstructedPhases) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto ref = reference_of(random_state(3, 2, 60 + s));
    const std::vector<double> w = {angle(rng), angle(rng), angle(rng)};
    const std::vector<Mat2> u = {diagonal_phase(w[0]), diagonal_phase(w[1]), diagonal_phase(w[2])};
    const PauliCoefficients c = coeffs(ref);
    const PauliCoefficients cp = coeffs(apply_local_unitary(ref, u));
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      const double got = solve_omega_pairwise(CorrelationBlock::extract(c, cp, i, j), i, {});
      EXPECT_NEAR(std::abs(std::sin(got - w[static_cast<std::size_t>(i)])), 0.0, 1e-8);
    }
  }
}

TEST(SolveOmegaPairwiseTest, Errors) {
  const PurePair p;  // (1,3)/(2,3) slices vanish
  EXPECT_EQ(code_of([&] { solve_omega_pairwise(CorrelationBlock::extract(p.ref, p.ref_prime, 0, 1), 0, {}); }),
            ErrorCode::kVanishingDenominator);
  // r'_{3,3} != r_{3,3}
  const auto a = coefficient_state(2, {{"00", 0.25}, {"13", 0.1}, {"33", 0.1}});
  const auto b = coefficient_state(2, {{"00", 0.25}, {"13", 0.1}, {"33", 0.05}});
  EXPECT_EQ(code_of([&] { solve_omega_pairwise(CorrelationBlock::extract(coeffs(a), coeffs(b), 0, 1), 0, {}); }),
            ErrorCode::kInconsistentCoefficients);
}

TEST(PhaseSystemTest, MatrixMatchesRotationActions) {
  // M x reproduces the rotated 2x2 block for random blocks and angles.
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    CorrelationBlock block;
    block.qubit_i = 0;
    block.qubit_j = 1;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) block.ref(a, b) = u(rng);
    const double wi = u(rng) * kPi, wj = u(rng) * kPi;
    block.ref_prime = rotation_about_z(2 * wi) * block.ref * rotation_about_z(2 * wj).transpose();
    const double ci = std::cos(2 * wi), si = std::sin(2 * wi), cj = std::cos(2 * wj), sj = std::sin(2 * wj);
    const Eigen::Vector4d x(ci * cj, ci * sj, si * cj, si * sj);
    EXPECT_LE((phase_system_matrix(block, 0) * x - phase_system_rhs(block, 0)).norm(), 1e-14);
  }
}

TEST(SolveOmegaLinearSystemTest, PureExampleFamily) {
  const PurePair p;
  const CorrelationBlock block = CorrelationBlock::extract(p.ref, p.ref_prime, 0, 1);
  const PhasePairSolution s = solve_omega_linear_system(block, 0, {});
  EXPECT_NEAR(s.omega_target, 0.0, 1e-12);
  EXPECT_NEAR(s.omega_partner, kPi / 2, 1e-12);
  EXPECT_NEAR(std::cos(2 * (s.omega_target + s.omega_partner)), -1.0, 1e-12);
  EXPECT_EQ(s.family, PhasePairSolution::Family::kSumFixed);
  // Every member of the family solves the block.
  for (double w1 : {0.1, 0.7, 1.3}) {
    const double w2 = kPi / 2 - w1;
    const double c1 = std::cos(2 * w1), s1 = std::sin(2 * w1), c2 = std::cos(2 * w2), s2 = std::sin(2 * w2);
    const Eigen::Vector4d x(c1 * c2, c1 * s2, s1 * c2, s1 * s2);
    EXPECT_LE((phase_system_matrix(block, 0) * x - phase_system_rhs(block, 0)).norm(), 1e-15);
  }
}

TEST(SolveOmegaLinearSystemTest, IdenticalFormsGiveZero) {
  const PurePair p;
  const PhasePairSolution s = solve_omega_linear_system(CorrelationBlock::extract(p.ref, p.ref, 0, 1), 0, {});
  EXPECT_NEAR(s.omega_target, 0.0, 1e-12);
  EXPECT_NEAR(s.omega_partner, 0.0, 1e-12);
}

TEST(SolveOmegaLinearSystemTest, RecoversForwardConstructedPair) {
  // A reference form with vanishing (1,3)/(2,3) slices and a generic 2x2 block.
  const auto ref = coefficient_state(2, {{"00", 0.25}, {"03", -0.05}, {"30", -0.03}, {"11", 0.07},
                                         {"12", 0.02}, {"21", -0.04}, {"22", 0.03}, {"33", 0.06}});
  const std::vector<Mat2> u = {diagonal_phase(0.4), diagonal_phase(1.1)};
  const PauliCoefficients c = coeffs(ref);
  const PauliCoefficients cp = coeffs(apply_local_unitary(ref, u));
  const PhasePairSolution s = solve_omega_linear_system(CorrelationBlock::extract(c, cp, 0, 1), 0, {});
  EXPECT_EQ(s.family, PhasePairSolution::Family::kUnique);
  ASSERT_TRUE(s.alternative.has_value());
  const bool direct = std::abs(s.omega_target - 0.4) < 1e-8 && std::abs(s.omega_partner - 1.1) < 1e-8;
  const bool shifted = std::abs((*s.alternative)[0] - 0.4) < 1e-8 && std::abs((*s.alternative)[1] - 1.1) < 1e-8;
  EXPECT_TRUE(direct || shifted) << s.omega_target << " " << s.omega_partner;
  // With the partner known the target follows uniquely.
  const PhasePairSolution g = solve_omega_linear_system(CorrelationBlock::extract(c, cp, 0, 1), 0, {}, 1.1);
  EXPECT_NEAR(g.omega_target, 0.4, 1e-8);
  EXPECT_EQ(g.family, PhasePairSolution::Family::kPartnerGiven);
}

TEST(SolveOmegaLinearSystemTest, Errors) {
  const auto flat = coefficient_state(2, {{"00", 0.25}, {"33", 0.1}});
  EXPECT_EQ(code_of([&] { solve_omega_linear_system(CorrelationBlock::extract(coeffs(flat), coeffs(flat), 0, 1), 0, {}); }),
            ErrorCode::kAllCoefficientsVanish);
  const auto a = coefficient_state(2, {{"00", 0.25}, {"11", 0.1}});
  const auto b = coefficient_state(2, {{"00", 0.25}, {"11", 0.05}});
  EXPECT_EQ(code_of([&] { solve_omega_linear_system(CorrelationBlock::extract(coeffs(a), coeffs(b), 0, 1), 0, {}); }),
            ErrorCode::kNoConsistentSolution);
}

CorrelationBlock slice_block(const Vec3& x, const Vec3& y) {
  // Strong qubit 0, weak partner 1: the slice is column 3 of the block.
  CorrelationBlock block;
  block.ref.col(2) = x;
  block.ref_prime.col(2) = y;
  return block;
}

TEST(SolveRotationForStrongQubitTest, IdenticalSlicesGiveIdentity) {
  const SU2Params p = solve_rotation_for_strong_qubit(slice_block({0.1, 0.2, 0.05}, {0.1, 0.2, 0.05}), 0, {});
  EXPECT_NEAR(p.phi, 0.0, 1e-12);
}

TEST(SolveRotationForStrongQubitTest, QuarterTurnAboutZ) {
  const Vec3 x(0.2, 0, 0), y(0, 0.2, 0);
  const SU2Params p = solve_rotation_for_strong_qubit(slice_block(x, y), 0, {});
  const Rotation3 r = induced_rotation(su2_from_params(p));
  EXPECT_LE((r * x - y).norm(), 1e-10);
  // Direct rotation-matrix oracle: the minimal rotation is the z quarter turn.
  Rotation3 rz;
  rz << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_LE((r - rz).norm(), 1e-10);
}

TEST(SolveRotationForStrongQubitTest, AntiparallelSlices) {
  const Vec3 x(0.1, -0.2, 0.05);
  const SU2Params p = solve_rotation_for_strong_qubit(slice_block(x, -x), 0, {});
  EXPECT_LE((induced_rotation(su2_from_params(p)) * x + x).norm(), 1e-10);
}

TEST(SolveRotationForStrongQubitTest, ForwardConstructedOnStrongQubit) {
  // Qubit 0 maximally mixed, qubit 1 not: (|0>|a> + |1>|b>)/sqrt2 with
  // orthogonal, non-balanced a, b.
  for (std::uint64_t s = 0; s < 30; ++s) {
    ComplexVector psi = ComplexVector::Zero(4);
    const double t = 0.3 + 0.02 * static_cast<double>(s);
    psi << std::cos(t), Complex(0.0, std::sin(t)), std::sin(t) * 0.3, std::cos(t) * 0.3;
    psi.normalize();
    const auto rho = MultiQubitState::from_matrix(
        0.6 * psi * psi.adjoint() + 0.4 * random_state(2, 1, 900 + s).matrix());
    const auto ref = reference_of(rho);
    const Mat2 g = random_local_unitary(1, 400 + s)[0];
    const auto moved = apply_local_unitary(ref, std::vector<Mat2>{g, Mat2::Identity()});
    const CorrelationBlock block = CorrelationBlock::extract(coeffs(ref), coeffs(moved), 0, 1);
    if (block.ref.col(2).norm() < 1e-6) continue;
    const SU2Params p = solve_rotation_for_strong_qubit(block, 0, {});
    EXPECT_LE((induced_rotation(su2_from_params(p)) * block.ref.col(2) - block.ref_prime.col(2)).norm(), 1e-8);
  }
}

TEST(SolveRotationForStrongQubitTest, Errors) {
  EXPECT_EQ(code_of([] { solve_rotation_for_strong_qubit(slice_block(Vec3::Zero(), Vec3::Zero()), 0, {}); }),
            ErrorCode::kVanishingSlice);
  EXPECT_EQ(code_of([] { solve_rotation_for_strong_qubit(slice_block({0.1, 0, 0}, {0.2, 0, 0}), 0, {}); }),
            ErrorCode::kNormMismatch);
}

TEST(SolveAllStrongTest, IdenticalBlocksGiveZeroResidual) {
  const PauliCoefficients c = coeffs(testing::ghz(2));
  const StrongPairSolution s = solve_all_strong(CorrelationBlock::extract(c, c, 0, 1), {});
  EXPECT_LE(s.residual, 1e-10);
  EXPECT_NEAR(s.first.phi, 0.0, 1e-12);
  EXPECT_NEAR(s.second.phi, 0.0, 1e-12);
}

TEST(SolveAllStrongTest, BellPairUnderRandomLocals) {
  const auto bell = testing::ghz(2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto moved = apply_local_unitary(bell, random_local_unitary(2, 70 + s));
    const CorrelationBlock block = CorrelationBlock::extract(coeffs(bell), coeffs(moved), 0, 1);
    const StrongPairSolution sol = solve_all_strong(block, {});
    EXPECT_LE(sol.residual, 1e-10);
    const std::vector<ResidualUnitary> r = {ResidualUnitary::general(sol.first), ResidualUnitary::general(sol.second)};
    EXPECT_LE(verify_equivalence(bell, moved, r), 1e-8);
  }
}

TEST(SolveAllStrongTest, ReflectedBlockHasNoRotationSolution) {
  // diag(1,-1,1) C flips det C, which no pair of proper rotations can do.
  const auto a = coefficient_state(2, {{"00", 0.25}, {"11", 6.0 / 25}, {"22", -6.0 / 25}, {"33", 0.25}});
  CorrelationBlock block = CorrelationBlock::extract(coeffs(a), coeffs(a), 0, 1);
  block.ref_prime = Eigen::Vector3d(1, -1, 1).asDiagonal() * block.ref;
  EXPECT_NEAR(block.ref_prime.determinant(), -block.ref.determinant(), 1e-15);
  EXPECT_EQ(code_of([&] { solve_all_strong(block, {}); }), ErrorCode::kNoSolutionFound);
}

TEST(SolveAllStrongTest, VanishingBlocks) {
  const PauliCoefficients c = coeffs(MultiQubitState::from_matrix(ComplexMatrix::Identity(4, 4) / 4.0));
  EXPECT_EQ(code_of([&] { solve_all_strong(CorrelationBlock::extract(c, c, 0, 1), {}); }),
            ErrorCode::kAllCoefficientsVanish);
}

TEST(EscalateOrderTest, GhzUnderDiagonalPhases) {
  const auto g = testing::ghz(3);
  const std::vector<Mat2> u = {diagonal_phase(0.3), diagonal_phase(1.2), diagonal_phase(2.0)};
  const auto moved = apply_local_unitary(g, u);
  const PauliCoefficients c = coeffs(g), cp = coeffs(moved);
  const Correlations cr(c);
  // Only the sigma3 sigma3 entries survive at order 2.
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      Matrix3 expected = Matrix3::Zero();
      expected(2, 2) = 0.125;
      EXPECT_LE((cr.pair(i, j) - expected).norm(), 1e-15);
    }
  }
  // With qubits 0 and 1 fixed, qubit 2 resolves from the order-3 tensors.
  PartialResiduals solved(3);
  solved[0] = ResidualUnitary::general(su2_params_from_rotation(induced_rotation(u[0])));
  solved[1] = ResidualUnitary::general(su2_params_from_rotation(induced_rotation(u[1])));
  const auto out = escalate_order(c, cp, {true, true, true}, solved, {});
  // Order-2 data on qubit 2 is nonzero (sigma3 sigma3), so escalation leaves it.
  EXPECT_FALSE(out[2].has_value());
  // The order-3 anchor does fix it.
  int rank = 0;
  const auto r = anchor_qubit(cr, Correlations(cp), 2, true, solved, 3, {}, &rank);
  ASSERT_TRUE(r.has_value());
  EXPECT_GE(rank, 2);
  std::vector<ResidualUnitary> all = {*solved[0], *solved[1], *r};
  EXPECT_LE(verify_equivalence(g, moved, all), 1e-8);
}

TEST(EscalateOrderTest, NoOpWhenOrderTwoBlocksPresent) {
  const PauliCoefficients c = coeffs(reference_of(random_state(3, 2, 5)));
  const auto out = escalate_order(c, c, {false, false, false}, PartialResiduals(3), {});
  for (const auto& r : out) EXPECT_FALSE(r.has_value());
}

TEST(EscalateOrderTest, OnlyFourBodyCorrelationsExceedTheOrderLimit) {
  const auto rho = coefficient_state(4, {{"0000", 1.0 / 16}, {"1111", 0.5 / 16}, {"2222", 0.3 / 16}});
  const PauliCoefficients c = coeffs(rho);
  EXPECT_EQ(code_of([&] { escalate_order(c, c, {true, true, true, true}, PartialResiduals(4), {}); }),
            ErrorCode::kOrderLimitExceeded);
}

TEST(EscalateOrderTest, DecoupledQubitIsFree) {
  // Qubit 2 is maximally mixed and uncorrelated with the rest.
  const auto pair = random_state(2, 2, 19);
  const auto rho = MultiQubitState::from_matrix(testing::kron(pair.matrix(), ComplexMatrix::Identity(2, 2) / 2.0));
  const PauliCoefficients c = coeffs(rho);
  EXPECT_TRUE(qubit_is_free(c, c, 2, true, 1e-9));
  EXPECT_FALSE(qubit_is_free(c, c, 0, false, 1e-9));
  const auto out = escalate_order(c, c, {false, false, true}, PartialResiduals(3), {});
  ASSERT_TRUE(out[2].has_value());
  EXPECT_LE((out[2]->matrix() - Mat2::Identity()).norm(), 1e-15);
}

TEST(RefineResidualsTest, ConvergesFromPerturbedStart) {
  const auto ref = reference_of(random_state(3, 2, 77));
  const std::vector<double> w = {0.2, 0.9, 2.5};
  std::vector<Mat2> u;
  for (double x : w) u.push_back(diagonal_phase(x));
  const PauliCoefficients c = coeffs(ref), cp = coeffs(apply_local_unitary(ref, u));
  std::vector<ResidualUnitary> r = {ResidualUnitary::phase(0.25), ResidualUnitary::phase(0.85), ResidualUnitary::phase(2.45)};
  const double res = refine_residuals(Correlations(c), Correlations(cp), {false, false, false},
                                      {true, true, true}, r, 3, 200, 1e-12);
  EXPECT_LE(res, 1e-10);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(std::abs(std::sin(r[k].omega() - w[k])), 0.0, 1e-8);
}

TEST(CorrelationResidualTest, ZeroForTrueRotations) {
  const auto rho = random_state(3, 3, 12);
  const auto u = random_local_unitary(3, 13);
  const PauliCoefficients c = coeffs(rho), cp = coeffs(apply_local_unitary(rho, u));
  std::vector<Rotation3> rot;
  for (const auto& m : u) rot.push_back(induced_rotation(m));
  EXPECT_LE(correlation_residual(Correlations(c), Correlations(cp), rot, 3), 1e-14);
  EXPECT_GT(correlation_residual(Correlations(c), Correlations(cp), std::vector<Rotation3>(3, Rotation3::Identity()), 3), 1e-3);
}

TEST(AngleSolverTest, DeterministicResults) {
  const auto bell = testing::ghz(2);
  const auto moved = apply_local_unitary(bell, random_local_unitary(2, 5));
  const CorrelationBlock block = CorrelationBlock::extract(coeffs(bell), coeffs(moved), 0, 1);
  const StrongPairSolution a = solve_all_strong(block, {});
  const StrongPairSolution b = solve_all_strong(block, {});
  EXPECT_EQ(a.first.phi, b.first.phi);
  EXPECT_EQ(a.first.theta, b.first.theta);
  EXPECT_EQ(a.second.phi_az, b.second.phi_az);
  EXPECT_EQ(a.residual, b.residual);
}

}  // namespace
}  // namespace lueq
