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

#include "lueq/state.hpp"
#include "lueq/tolerances.hpp"
#include "lueq/types.hpp"

namespace lueq {

/// rho = V diag(lambda1, lambda2) V^dag with lambda1 <= lambda2. Column j of V
/// is the eigenvector for lambda_j; its first entry of largest magnitude is real
/// and nonnegative. For a maximally mixed input V is the identity.
struct Diagonalization {
  double lambda1 = 0.5;
  double lambda2 = 0.5;
  Mat2 v = Mat2::Identity();
  bool degenerate = true;
};

/// Parameters of U = exp(i (phi/2) n.sigma) with the axis
/// n = (cos phi_az sin theta, sin phi_az sin theta, cos theta).
struct SU2Params {
  double phi = 0.0;     // [0, pi]
  double theta = 0.0;   // [0, pi]
  double phi_az = 0.0;  // [0, 2 pi)

  Vec3 axis() const;
};

Diagonalization diagonalize_qubit(const MultiQubitState& rho, double degen_tol = Tolerances{}.degen);

bool is_maximally_mixed(const MultiQubitState& rho, double tol);

/// cos(omega) 1 + i sin(omega) (n_r . sigma), the one-parameter family of
/// unitaries commuting with a non-maximally-mixed qubit state.
Mat2 cyclic_operator(const MultiQubitState& rho, double omega,
                     double degen_tol = Tolerances{}.degen);

Mat2 su2_from_params(const SU2Params& p);

/// The SO(3) rotation R with U sigma_b U^dag = sum_a R(a, b) sigma_a.
Rotation3 induced_rotation(const Mat2& u);

/// Inverse of induced_rotation composed with su2_from_params; the returned
/// parameters sit inside their documented ranges.
SU2Params su2_params_from_rotation(const Rotation3& r);

/// diag(e^{-i omega}, e^{i omega}).
Mat2 diagonal_phase(double omega);

/// Rotation by \p angle about the z axis, i.e. induced_rotation(diagonal_phase(angle / 2)).
Rotation3 rotation_about_z(double angle);

}  // namespace lueq
