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

#include <vector>

#include "lueq/state.hpp"

namespace lueq {

/// A reduced state together with the original label of every retained qubit:
/// slot k of the reduced state is qubit origin[k] of the parent.
struct ReducedState {
  MultiQubitState state;
  std::vector<int> origin;
};

/// Traces out every qubit not listed in \p keep (0-based, strictly increasing).
/// Goes through the Pauli coefficients of the retained support.
ReducedState partial_trace(const MultiQubitState& state, const std::vector<int>& keep);

/// Index-loop partial trace on the dense matrix; used to cross-check
/// partial_trace.
ReducedState partial_trace_dense(const MultiQubitState& state, const std::vector<int>& keep);

/// Shorthand for the 1-qubit marginal of \p qubit.
MultiQubitState single_qubit_marginal(const MultiQubitState& state, int qubit);

}  // namespace lueq
