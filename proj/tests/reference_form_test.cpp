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
#include "lueq/reference_form.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "lueq/error.hpp"
#include "lueq/oracle.hpp"
#include "lueq/pauli.hpp"
#include "lueq/reduction.hpp"
#include "lueq/spectral.hpp"
#include "test_support.hpp"

namespace lueq {
namespace {

std::vector<Mat2> diagonalizers(const MultiQubitState& rho) {
  std::vector<Mat2> v;
  for (int q = 0; q < rho.num_qubits(); ++q) v.push_back(diagonalize_qubit(single_qubit_marginal(rho, q)).v);
  return v;
}

TEST(ReferenceFormTest, PureExampleIsAlreadyInReferenceForm) {
  const auto rho = testing::pure_example();
  const std::vector<Mat2> id(2, Mat2::Identity());
  const auto ref = reference_form(rho, id);
  EXPECT_LE((ref.matrix() - rho.matrix()).norm(), 1e-15);
  EXPECT_EQ(diagonalizers(rho), id);
}

TEST(ReferenceFormTest, MixedPrimedExampleCoefficients) {
  const std::vector<Mat2> v = {testing::mixed_example_v(), testing::mixed_example_v2_prime()};
  const PauliCoefficients c = to_pauli_coefficients(reference_form(testing::mixed_example_prime(), v));
  const double s5 = std::sqrt(5.0);
  EXPECT_NEAR(c[PauliIndex({0, 3})], -7 * s5 / 300, 1e-12);
  EXPECT_NEAR(c[PauliIndex({3, 0})], -7 * s5 / 300, 1e-12);
  EXPECT_NEAR(c[PauliIndex({1, 1})], -49.0 / 6250, 1e-12);
  EXPECT_NEAR(c[PauliIndex({1, 3})], 49.0 / 18750, 1e-12);
  EXPECT_NEAR(c[PauliIndex({3, 1})], -49.0 / 18750, 1e-12);
  EXPECT_NEAR(c[PauliIndex({3, 3})], 147.0 / 12500, 1e-12);
  for (const char* zero : {"01", "10", "02", "20", "12", "21", "22", "23", "32"}) {
    const PauliIndex idx({static_cast<std::uint8_t>(zero[0] - '0'), static_cast<std::uint8_t>(zero[1] - '0')});
    EXPECT_NEAR(c[idx], 0.0, 1e-12) << zero;
  }
}

TEST(ReferenceFormTest, IdentityDiagonalizersLeaveStateUnchanged) {
  const auto rho = random_state(3, 3, 3);
  const std::vector<Mat2> id(3, Mat2::Identity());
  EXPECT_EQ(reference_form(rho, id).matrix(), rho.matrix());
}

TEST(ReferenceFormTest, MarginalsAreDiagonalWithLargerSecondPopulation) {
  for (int n = 1; n <= 4; ++n) {
    for (int rank : {1, 2, 1 << n}) {
      const auto rho = random_state(n, rank, 70 + static_cast<std::uint64_t>(10 * n + rank));
      const auto ref = reference_form(rho, diagonalizers(rho));
      for (int q = 0; q < n; ++q) {
        const Vec3 r = bloch_vector(single_qubit_marginal(ref, q));
        EXPECT_NEAR(r(0), 0.0, 1e-9);
        EXPECT_NEAR(r(1), 0.0, 1e-9);
        EXPECT_LE(r(2), 1e-12);
      }
    }
  }
}

TEST(ReferenceFormTest, ReducedReferenceFormsCommuteWithPartialTrace) {
  for (int n = 2; n <= 4; ++n) {
    const auto rho = random_state(n, 2, 90 + static_cast<std::uint64_t>(n));
    const auto v = diagonalizers(rho);
    const auto ref = reference_form(rho, v);
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> keep;
      std::vector<Mat2> sub;
      for (int q = 0; q < n; ++q) {
        if (mask & (1 << q)) {
          keep.push_back(q);
          sub.push_back(v[static_cast<std::size_t>(q)]);
        }
      }
      const auto lhs = partial_trace(ref, keep).state.matrix();
      const auto rhs = reference_form(partial_trace(rho, keep).state, sub).matrix();
      EXPECT_LE((lhs - rhs).norm(), 1e-12);
    }
  }
}

TEST(ReferenceFormTest, AllMaximallyMixedMarginalsGiveTheStateItself) {
  const auto rho = testing::ghz(3);
  const auto v = diagonalizers(rho);
  EXPECT_EQ(reference_form(rho, v).matrix(), rho.matrix());
}

TEST(ReferenceFormTest, RejectsBadDiagonalizers) {
  const auto rho = testing::ket_zero(2);
  try {
    reference_form(rho, std::vector<Mat2>(3, Mat2::Identity()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kArityMismatch);
  }
  try {
    reference_form(rho, std::vector<Mat2>{Mat2::Identity(), 2.0 * Mat2::Identity()});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonUnitaryInput);
  }
}

}  // namespace
}  // namespace lueq
