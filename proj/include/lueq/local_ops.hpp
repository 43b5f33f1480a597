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

#include "lueq/types.hpp"

namespace lueq {

/// (U_0 (x) ... (x) U_{n-1}) M (U_0 (x) ... (x) U_{n-1})^dag, applied factor by
/// factor without forming the 2^n x 2^n product.
ComplexMatrix conjugate_by_locals(const ComplexMatrix& m, std::span<const Mat2> locals);

/// Kronecker product of the factors, qubit 0 leftmost.
ComplexMatrix kron_all(std::span<const Mat2> locals);

/// Frobenius distance of U^dag U from the identity.
double unitarity_defect(const Mat2& u);

}  // namespace lueq
