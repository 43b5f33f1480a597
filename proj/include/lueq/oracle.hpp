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
#include <vector>

#include "lueq/state.hpp"
#include "lueq/types.hpp"

namespace lueq {

struct OracleResult {
  std::vector<Mat2> unitaries;
  double residual = 0.0;  // ||rho' - U rho U^dag||_F at the best point
};

/// Multi-start Nelder-Mead search over products of local unitaries. A small
/// residual certifies equivalence; a large one is only evidence against it.
/// \p budget is the number of starts (the identity is always the first).
/// Throws kTooManyQubits for n > 3.
OracleResult brute_force_lu_search(const MultiQubitState& rho, const MultiQubitState& rho_prime,
                                   int budget, std::uint64_t seed);

/// Haar-random pure state vector on n qubits.
ComplexVector random_state_vector(int n, std::uint64_t seed);

/// Mixture of \p rank Haar-random pure states with Dirichlet(1,...,1) weights.
/// Rank 1 equals the outer product of random_state_vector(n, seed).
MultiQubitState random_state(int n, int rank, std::uint64_t seed);

/// n independent Haar-random SU(2) factors.
std::vector<Mat2> random_local_unitary(int n, std::uint64_t seed);

}  // namespace lueq
