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

namespace lueq {

/// Numerical gates used across the library. Every comparison that decides a
/// branch reads its threshold from here so that branch selection is consistent.
struct Tolerances {
  double herm = 1e-10;    // relative, ||M - M^dag||_F / ||M||_F
  double trace = 1e-10;   // |Tr M - 1|
  double psd = 1e-9;      // smallest admissible eigenvalue is -psd
  double degen = 1e-9;    // |lambda2 - lambda1| below this means maximally mixed
  double coef = 1e-9;     // a Pauli coefficient below this counts as zero
  double solve = 1e-10;   // residual target for angle solvers
  double verify = 1e-8;   // relative Frobenius residual accepted by verification
};

}  // namespace lueq
