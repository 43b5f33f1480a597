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
#include "lueq/reduction.hpp"

#include <cstdint>

#include "lueq/error.hpp"
#include "lueq/pauli.hpp"

namespace lueq {

namespace {

void check_keep(const MultiQubitState& state, const std::vector<int>& keep) {
  if (keep.empty()) throw Error(ErrorCode::kEmptyKeepSet, "keep set is empty");
  const int n = state.num_qubits();
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 0 || keep[k] >= n) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "qubit " + std::to_string(keep[k]) + " outside 0.." + std::to_string(n - 1));
    }
    if (k > 0 && keep[k] <= keep[k - 1]) {
      throw Error(ErrorCode::kIndexOutOfRange, "keep set must be strictly increasing");
    }
  }
}

}  // namespace

ReducedState partial_trace(const MultiQubitState& state, const std::vector<int>& keep) {
  check_keep(state, keep);
  const int n = state.num_qubits();
  const int k = static_cast<int>(keep.size());
  if (k == n) return {state, keep};

  // The reduced coefficient at beta is 2^{n-k} times the parent coefficient
  // with beta on the kept qubits and the identity elsewhere, i.e.
  // Tr(sigma_(beta,0) rho) / 2^k. Only those 4^k traces are evaluated.
  const std::size_t count = std::size_t{1} << (2 * k);
  const double scale = 1.0 / static_cast<double>(std::uint64_t{1} << k);
  std::vector<double> r(count);
  std::vector<std::uint8_t> alphas(static_cast<std::size_t>(n));
  for (std::size_t off = 0; off < count; ++off) {
    const auto beta = PauliIndex::from_offset(off, k);
    std::fill(alphas.begin(), alphas.end(), 0);
    for (int s = 0; s < k; ++s) alphas[static_cast<std::size_t>(keep[static_cast<std::size_t>(s)])] = beta[s];
    r[off] = (pauli_trace(state.matrix(), n, PauliIndex(alphas)) * scale).real();
  }

  // Rebuild the reduced matrix directly; it inherits validity from the parent.
  return {MultiQubitState::assume_valid(matrix_from_coefficients(k, r)), keep};
}

ReducedState partial_trace_dense(const MultiQubitState& state, const std::vector<int>& keep) {
  check_keep(state, keep);
  const int n = state.num_qubits();
  const int k = static_cast<int>(keep.size());
  std::vector<int> traced;
  for (int q = 0, s = 0; q < n; ++q) {
    if (s < k && keep[static_cast<std::size_t>(s)] == q) {
      ++s;
    } else {
      traced.push_back(q);
    }
  }

  // Scatter a compact index over the listed qubits into a full basis index.
  auto scatter = [n](std::uint64_t compact, const std::vector<int>& qubits) {
    std::uint64_t full = 0;
    const int m = static_cast<int>(qubits.size());
    for (int s = 0; s < m; ++s) {
      if ((compact >> (m - 1 - s)) & 1u) full |= std::uint64_t{1} << (n - 1 - qubits[static_cast<std::size_t>(s)]);
    }
    return full;
  };

  const std::uint64_t kdim = std::uint64_t{1} << k;
  const std::uint64_t tdim = std::uint64_t{1} << (n - k);
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(kdim), static_cast<Eigen::Index>(kdim));
  const auto& m = state.matrix();
  for (std::uint64_t a = 0; a < kdim; ++a) {
    const auto fa = scatter(a, keep);
    for (std::uint64_t b = 0; b < kdim; ++b) {
      const auto fb = scatter(b, keep);
      Complex acc{0.0, 0.0};
      for (std::uint64_t t = 0; t < tdim; ++t) {
        const auto ft = scatter(t, traced);
        acc += m(static_cast<Eigen::Index>(fa | ft), static_cast<Eigen::Index>(fb | ft));
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
    }
  }
  return {MultiQubitState::assume_valid(std::move(out)), keep};
}

MultiQubitState single_qubit_marginal(const MultiQubitState& state, int qubit) {
  return partial_trace(state, {qubit}).state;
}

}  // namespace lueq
