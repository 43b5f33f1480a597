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

#include <span>

#include "lueq/state.hpp"
#include "lueq/types.hpp"

namespace lueq {

/// (V_0^dag (x) ... ) rho (V_0 (x) ... ): the state seen in the eigenbases of its
/// own 1-qubit marginals. Throws kArityMismatch or kNonUnitaryInput.
MultiQubitState reference_form(const MultiQubitState& state, std::span<const Mat2> diagonalizers);

}  // namespace lueq
