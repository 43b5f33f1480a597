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
#include "lueq/spectral.hpp"

#include <cmath>

#include "lueq/error.hpp"
#include "lueq/pauli.hpp"

namespace lueq {

namespace {

void require_single_qubit(const MultiQubitState& rho) {
  if (rho.num_qubits() != 1) {
    throw Error(ErrorCode::kWrongArity,
                "expected a 1-qubit state, got " + std::to_string(rho.num_qubits()) + " qubits");
  }
}

// Rotate the column so that its first entry of largest magnitude is real and
// nonnegative.
Eigen::Vector2cd fix_phase(Eigen::Vector2cd v) {
  const double a0 = std::abs(v(0));
  const double a1 = std::abs(v(1));
  const int k = (a1 > a0 + 1e-12) ? 1 : 0;
  const double ak = k == 0 ? a0 : a1;
  if (ak > 0.0) v *= std::conj(v(k)) / ak;
  return v;
}

}  // namespace

Vec3 SU2Params::axis() const {
  return Vec3(std::cos(phi_az) * std::sin(theta), std::sin(phi_az) * std::sin(theta),
              std::cos(theta));
}

Diagonalization diagonalize_qubit(const MultiQubitState& rho, double degen_tol) {
  require_single_qubit(rho);
  const auto& m = rho.matrix();
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const Complex b = m(0, 1);
  const double mean = 0.5 * (a + d);
  const double half_gap = std::hypot(0.5 * (a - d), std::abs(b));

  Diagonalization out;
  out.lambda1 = mean - half_gap;
  out.lambda2 = mean + half_gap;
  if (2.0 * half_gap <= degen_tol) {
    out.degenerate = true;
    out.v = Mat2::Identity();
    return out;
  }
  out.degenerate = false;

  // Two algebraically equivalent null vectors of (rho - lambda1); take the
  // better conditioned one.
  const double l = out.lambda1;
  Eigen::Vector2cd c1(b, Complex(l - a, 0.0));
  Eigen::Vector2cd c2(Complex(l - d, 0.0), std::conj(b));
  Eigen::Vector2cd v1 = c1.squaredNorm() >= c2.squaredNorm() ? c1 : c2;
  v1 = fix_phase(v1.normalized());
  Eigen::Vector2cd v2(-std::conj(v1(1)), std::conj(v1(0)));
  v2 = fix_phase(v2);

  out.v.col(0) = v1;
  out.v.col(1) = v2;
  return out;
}

bool is_maximally_mixed(const MultiQubitState& rho, double tol) {
  require_single_qubit(rho);
  return (rho.matrix() - 0.5 * Mat2::Identity()).norm() <= tol;
}

Mat2 cyclic_operator(const MultiQubitState& rho, double omega, double degen_tol) {
  const Vec3 r = bloch_vector(rho);
  const double norm = r.norm();
  if (norm <= degen_tol) {
    throw Error(ErrorCode::kDegenerateState,
                "maximally mixed qubit: every SU(2) element commutes with it");
  }
  const Vec3 n = r / norm;
  Mat2 ns = n(0) * single_pauli(1) + n(1) * single_pauli(2) + n(2) * single_pauli(3);
  return std::cos(omega) * Mat2::Identity() + Complex(0.0, std::sin(omega)) * ns;
}

Mat2 su2_from_params(const SU2Params& p) {
  constexpr double kSlack = 1e-12;
  if (!(p.phi >= -kSlack && p.phi <= kPi + kSlack) ||
      !(p.theta >= -kSlack && p.theta <= kPi + kSlack) ||
      !(p.phi_az >= -kSlack && p.phi_az < 2.0 * kPi + kSlack)) {
    throw Error(ErrorCode::kParamOutOfRange, "SU(2) parameters outside [0,pi]x[0,pi]x[0,2pi)");
  }
  const double c = std::cos(0.5 * p.phi);
  const double s = std::sin(0.5 * p.phi);
  const double st = std::sin(p.theta);
  const double ct = std::cos(p.theta);
  const Complex e_minus = std::polar(1.0, -p.phi_az);
  Mat2 u;
  u(0, 0) = Complex(c, s * ct);
  u(0, 1) = Complex(0.0, s * st) * e_minus;
  u(1, 0) = Complex(0.0, s * st) * std::conj(e_minus);
  u(1, 1) = Complex(c, -s * ct);
  return u;
}

Rotation3 induced_rotation(const Mat2& u) {
  Rotation3 r;
  const Mat2 ud = u.adjoint();
  for (int b = 0; b < 3; ++b) {
    const Mat2 img = u * single_pauli(b + 1) * ud;
    for (int a = 0; a < 3; ++a) {
      r(a, b) = 0.5 * (single_pauli(a + 1) * img).trace().real();
    }
  }
  return r;
}

SU2Params su2_params_from_rotation(const Rotation3& r) {
  // U = exp(i (phi/2) n.sigma) induces the rotation by -phi about n, so a
  // rotation by psi about m is realised with phi = psi and n = -m.
  const Eigen::AngleAxisd aa(r);
  SU2Params p;
  if (aa.angle() < 1e-15) return p;
  p.phi = std::min(aa.angle(), kPi);
  const Vec3 n = -aa.axis().normalized();
  p.theta = std::acos(std::clamp(n(2), -1.0, 1.0));
  double az = std::atan2(n(1), n(0));
  if (az < 0.0) az += 2.0 * kPi;
  if (az >= 2.0 * kPi) az = 0.0;
  p.phi_az = az;
  return p;
}

Mat2 diagonal_phase(double omega) {
  Mat2 u = Mat2::Zero();
  u(0, 0) = std::polar(1.0, -omega);
  u(1, 1) = std::polar(1.0, omega);
  return u;
}

Rotation3 rotation_about_z(double angle) {
  Rotation3 r;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

}  // namespace lueq
