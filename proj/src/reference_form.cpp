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

#include <vector>

#include "lueq/error.hpp"
#include "lueq/local_ops.hpp"

namespace lueq {

MultiQubitState reference_form(const MultiQubitState& state, std::span<const Mat2> diagonalizers) {
  if (static_cast<int>(diagonalizers.size()) != state.num_qubits()) {
    throw Error(ErrorCode::kArityMismatch, "need one diagonalizer per qubit");
  }
  std::vector<Mat2> inverses;
  inverses.reserve(diagonalizers.size());
  for (const auto& v : diagonalizers) {
    if (unitarity_defect(v) > 1e-10) {
      throw Error(ErrorCode::kNonUnitaryInput, "diagonalizer is not unitary");
    }
    inverses.push_back(v.adjoint());
  }
  return MultiQubitState::assume_valid(conjugate_by_locals(state.matrix(), inverses));
}

}  // namespace lueq
