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
#include "lueq/pauli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lueq/error.hpp"
#include "lueq/oracle.hpp"
#include "test_support.hpp"

namespace lueq {
namespace {

using testing::coefficient_state;
using testing::pauli_string;

std::string axes_of(std::size_t offset, int n) { return PauliIndex::from_offset(offset, n).to_string(); }

TEST(PauliIndexTest, OffsetIsBaseFourWithFirstQubitMostSignificant) {
  const PauliIndex idx({1, 3});
  EXPECT_EQ(idx.offset(), 7u);
  EXPECT_EQ(PauliIndex::from_offset(7, 2), idx);
  EXPECT_EQ(idx.to_string(), "13");
}

TEST(PauliMatrixTest, AllIdentityIsIdentity) {
  EXPECT_TRUE(pauli_matrix(PauliIndex({0, 0})).isApprox(ComplexMatrix::Identity(4, 4)));
}

TEST(PauliMatrixTest, SingleSigmaThree) {
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  expected(1, 1) = -1.0;
  EXPECT_EQ(pauli_matrix(PauliIndex({3})), expected);
}

TEST(PauliMatrixTest, SigmaOneSigmaThreeIsTracelessInvolution) {
  const ComplexMatrix m = pauli_matrix(PauliIndex({1, 3}));
  EXPECT_EQ(m, pauli_string("13"));
  EXPECT_NEAR(std::abs(m.trace()), 0.0, 1e-15);
  EXPECT_TRUE((m * m).isApprox(ComplexMatrix::Identity(4, 4)));
}

TEST(PauliMatrixTest, MatchesHandWrittenKroneckerProducts) {
  for (int n = 1; n <= 3; ++n) {
    for (std::size_t off = 0; off < (std::size_t{1} << (2 * n)); ++off) {
      const std::string axes = axes_of(off, n);
      EXPECT_EQ(pauli_matrix(PauliIndex::from_offset(off, n)), pauli_string(axes)) << axes;
    }
  }
}

TEST(PauliMatrixTest, OrthogonalityExhaustiveUpToThreeQubits) {
  for (int n = 1; n <= 3; ++n) {
    const std::size_t count = std::size_t{1} << (2 * n);
    std::vector<ComplexMatrix> basis;
    for (std::size_t off = 0; off < count; ++off) basis.push_back(pauli_string(axes_of(off, n)));
    const double dim = static_cast<double>(1 << n);
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = 0; b < count; ++b) {
        const Complex t = (basis[a] * basis[b]).trace();
        ASSERT_NEAR(std::abs(t - Complex(a == b ? dim : 0.0, 0.0)), 0.0, 1e-12) << a << "," << b;
      }
    }
  }
}

TEST(PauliTraceTest, AgreesWithDenseTrace) {
  const MultiQubitState rho = random_state(3, 3, 11);
  for (std::size_t off = 0; off < 64; ++off) {
    const PauliIndex idx = PauliIndex::from_offset(off, 3);
    const Complex dense = (pauli_string(idx.to_string()) * rho.matrix()).trace();
    EXPECT_NEAR(std::abs(pauli_trace(rho.matrix(), 3, idx) - dense), 0.0, 1e-13);
  }
}

TEST(ToPauliCoefficientsTest, KetZeroZero) {
  const PauliCoefficients c = to_pauli_coefficients(testing::ket_zero(2));
  for (std::size_t off = 0; off < 16; ++off) {
    const std::string axes = axes_of(off, 2);
    const bool expected_nonzero = axes == "00" || axes == "03" || axes == "30" || axes == "33";
    EXPECT_NEAR(c[off], expected_nonzero ? 0.25 : 0.0, 1e-15) << axes;
  }
}

TEST(ToPauliCoefficientsTest, PureExampleCoefficients) {
  // Built from amplitudes so that the coefficients are computed, not copied.
  const auto rho = MultiQubitState::from_amplitudes(testing::pure_example_amplitudes());
  const PauliCoefficients c = to_pauli_coefficients(rho);
  EXPECT_NEAR(c[PauliIndex({0, 3})], -7.0 / 100, 1e-15);
  EXPECT_NEAR(c[PauliIndex({3, 0})], -7.0 / 100, 1e-15);
  EXPECT_NEAR(c[PauliIndex({1, 1})], 6.0 / 25, 1e-15);
  EXPECT_NEAR(c[PauliIndex({2, 2})], -6.0 / 25, 1e-15);
  EXPECT_NEAR(c[PauliIndex({3, 3})], 0.25, 1e-15);
  EXPECT_NEAR(c[PauliIndex({1, 2})], 0.0, 1e-15);
}

TEST(ToPauliCoefficientsTest, MaximallyMixed) {
  const auto rho = MultiQubitState::from_matrix(ComplexMatrix::Identity(4, 4) / 4.0);
  const PauliCoefficients c = to_pauli_coefficients(rho);
  EXPECT_DOUBLE_EQ(c[0], 0.25);
  for (std::size_t off = 1; off < 16; ++off) EXPECT_EQ(c[off], 0.0);
}

TEST(ToPauliCoefficientsTest, RejectsNonHermitianMatrix) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2) / 2.0;
  m(0, 1) = Complex(0.0, 0.1);  // not mirrored below the diagonal
  try {
    to_pauli_coefficients(MultiQubitState::assume_valid(m));
    FAIL() << "expected NonHermitianInput";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonHermitianInput);
  }
}

TEST(FromPauliCoefficientsTest, PrimedPureExampleIsItsPureState) {
  const auto rho = testing::pure_example_prime();
  const ComplexVector psi = testing::pure_example_prime_amplitudes();
  EXPECT_LE((rho.matrix() - psi * psi.adjoint()).norm(), 1e-15);
}

TEST(FromPauliCoefficientsTest, SingleQubitMaximallyMixed) {
  const auto rho = from_pauli_coefficients(PauliCoefficients(1, {0.5, 0.0, 0.0, 0.0}));
  EXPECT_TRUE(rho.matrix().isApprox(ComplexMatrix::Identity(2, 2) / 2.0));
}

TEST(FromPauliCoefficientsTest, RoundTripRandomStates) {
  for (int n = 1; n <= 4; ++n) {
    for (int rank : {1, 2, 1 << n}) {
      const auto rho = random_state(n, rank, 100 + static_cast<std::uint64_t>(n * 10 + rank));
      const auto back = from_pauli_coefficients(to_pauli_coefficients(rho));
      EXPECT_LE((back.matrix() - rho.matrix()).norm(), 1e-12);
    }
  }
}

TEST(FromPauliCoefficientsTest, RejectsNonPositiveOperator) {
  // Bloch vector of length 2.
  try {
    from_pauli_coefficients(PauliCoefficients(1, {0.5, 0.0, 0.0, 1.0}));
    FAIL() << "expected NotAState";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotAState);
  }
}

TEST(PauliCoefficientsTest, IdentityComponentAndPurityIdentity) {
  for (int n = 1; n <= 4; ++n) {
    const auto rho = random_state(n, 2, 40 + static_cast<std::uint64_t>(n));
    const PauliCoefficients c = to_pauli_coefficients(rho);
    EXPECT_NEAR(c[0], 1.0 / (1 << n), 1e-15);
    double sum = 0.0;
    for (double x : c.values()) sum += x * x;
    EXPECT_NEAR(std::ldexp(sum, n), rho.purity(), 1e-10);
  }
}

TEST(BlochVectorTest, PureExampleMarginal) {
  const auto rho1 = coefficient_state(1, {{"0", 0.5}, {"3", -7.0 / 50}});
  const Vec3 r = bloch_vector(rho1);
  EXPECT_NEAR((r - Vec3(0, 0, -7.0 / 25)).norm(), 0.0, 1e-15);
}

TEST(BlochVectorTest, MaximallyMixedIsZero) {
  const auto rho = MultiQubitState::from_matrix(ComplexMatrix::Identity(2, 2) / 2.0);
  EXPECT_EQ(bloch_vector(rho), Vec3::Zero());
}

TEST(BlochVectorTest, MixedExampleMarginal) {
  const auto rho1 = coefficient_state(1, {{"0", 0.5}, {"1", -7.0 / 75}, {"3", -7.0 / 150}});
  const Vec3 r = bloch_vector(rho1);
  EXPECT_NEAR((r - Vec3(-14.0 / 75, 0, -7.0 / 75)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(r.norm(), 7.0 * std::sqrt(5.0) / 75, 1e-15);
}

TEST(BlochVectorTest, RequiresOneQubit) {
  try {
    bloch_vector(testing::ket_zero(2));
    FAIL() << "expected WrongArity";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWrongArity);
  }
}

TEST(BlochVectorTest, NormIsOneExactlyForPureStates) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    EXPECT_NEAR(bloch_vector(random_state(1, 1, s)).norm(), 1.0, 1e-12);
    EXPECT_LT(bloch_vector(random_state(1, 2, s)).norm(), 1.0);
  }
}

TEST(CorrelationCoefficientTest, MixedReferenceFormLookups) {
  const auto ref = coefficient_state(
      2, {{"00", 0.25}, {"03", -7 * std::sqrt(5.0) / 300}, {"30", -7 * std::sqrt(5.0) / 300},
          {"11", 49.0 / 6250}, {"13", 49.0 / 18750}, {"31", 49.0 / 18750}, {"33", 147.0 / 12500}});
  const PauliCoefficients c = to_pauli_coefficients(ref);
  EXPECT_NEAR(correlation_coefficient(c, {{0, 1}, {1, 3}}), 49.0 / 18750, 1e-15);
  EXPECT_NEAR(correlation_coefficient(c, {{0, 2}, {1, 3}}), 0.0, 1e-15);
  EXPECT_NEAR(correlation_coefficient(c, {}), 0.25, 1e-15);
}

TEST(CorrelationCoefficientTest, RejectsBadQubit) {
  const PauliCoefficients c = to_pauli_coefficients(testing::ket_zero(2));
  try {
    correlation_coefficient(c, {{2, 1}});
    FAIL() << "expected IndexOutOfRange";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndexOutOfRange);
  }
}

TEST(StateValidationTest, NamesViolatedInvariant) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2) * 0.45;
  try {
    MultiQubitState::from_matrix(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotUnitTrace);
    EXPECT_NE(std::string(e.what()).find("unit-trace"), std::string::npos);
  }
  m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.2;
  m(1, 1) = -0.2;
  try {
    MultiQubitState::from_matrix(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotAState);
    EXPECT_NE(std::string(e.what()).find("positive-semidefinite"), std::string::npos);
  }
  m = ComplexMatrix::Identity(2, 2) / 2.0;
  m(0, 1) = 0.1;
  try {
    MultiQubitState::from_matrix(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonHermitianInput);
  }
  ComplexVector v(2);
  v << 1.0, 1.0;
  try {
    MultiQubitState::from_amplitudes(v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotNormalized);
  }
  try {
    MultiQubitState::from_matrix(ComplexMatrix::Identity(3, 3) / 3.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWrongArity);
  }
}

}  // namespace
}  // namespace lueq
