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
#include "lueq/angle_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lueq/error.hpp"

namespace lueq {

namespace {

double wrap(double angle, double period) {
  double a = std::fmod(angle, period);
  if (a < 0.0) a += period;
  if (a >= period) a = 0.0;
  return a;
}

Rotation3 exp_so3(const Vec3& v) {
  const double t = v.norm();
  if (t < 1e-300) return Rotation3::Identity();
  return Eigen::AngleAxisd(t, v / t).toRotationMatrix();
}

// Kabsch: the rotation minimizing sum_k |R x_k - y_k|^2 for columns of X, Y.
Rotation3 kabsch(const Eigen::Matrix3Xd& x, const Eigen::Matrix3Xd& y) {
  const Matrix3 h = y * x.transpose();
  Eigen::JacobiSVD<Matrix3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3 d = Matrix3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

int numeric_rank(const Eigen::MatrixXd& m, double threshold) {
  if (m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  int rank = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()(k) > threshold) ++rank;
  }
  return rank;
}

std::size_t offset_of(int n, std::initializer_list<std::pair<int, int>> placed) {
  std::size_t off = 0;
  for (const auto& [q, axis] : placed) {
    off += static_cast<std::size_t>(axis) << (2 * (n - 1 - q));
  }
  return off;
}

// Minimizes |f(x)| by Levenberg-Marquardt with a central-difference Jacobian.
template <class F>
double levenberg_marquardt(Eigen::VectorXd& x, F&& f, int max_steps, double target) {
  Eigen::VectorXd r = f(x);
  double cost = r.norm();
  double lambda = 1e-3;
  constexpr double kStep = 1e-7;
  for (int step = 0; step < max_steps && cost > target; ++step) {
    Eigen::MatrixXd jac(r.size(), x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp(k) += kStep;
      xm(k) -= kStep;
      jac.col(k) = (f(xp) - f(xm)) / (2.0 * kStep);
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * r;
    bool improved = false;
    while (lambda < 1e12) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * (jtj.diagonal().array() + 1e-12).matrix();
      const Eigen::VectorXd delta = -a.ldlt().solve(g);
      const Eigen::VectorXd xn = x + delta;
      const Eigen::VectorXd rn = f(xn);
      const double cn = rn.norm();
      if (cn < cost) {
        x = xn;
        r = rn;
        const bool stalled = delta.norm() < 1e-15 || cost - cn < 1e-16 * cost;
        cost = cn;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = !stalled;
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) break;
  }
  return cost;
}

Rotation3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

// Rows of the oriented block that a residual on the qubit can mix: both
// transverse axes for a diagonal phase, all three for a general rotation.
int active_axes(bool strong) { return strong ? 3 : 2; }

}  // namespace

// ---------------------------------------------------------------------------
// ResidualUnitary

ResidualUnitary ResidualUnitary::phase(double omega) {
  ResidualUnitary r;
  r.kind_ = Kind::kDiagonalPhase;
  r.omega_ = wrap(omega, 2.0 * kPi);
  return r;
}

ResidualUnitary ResidualUnitary::general(const SU2Params& params) {
  ResidualUnitary r;
  r.kind_ = Kind::kGeneral;
  r.params_ = params;
  return r;
}

ResidualUnitary ResidualUnitary::identity(bool strong) {
  return strong ? general(SU2Params{}) : phase(0.0);
}

Mat2 ResidualUnitary::matrix() const {
  return kind_ == Kind::kDiagonalPhase ? diagonal_phase(omega_) : su2_from_params(params_);
}

Rotation3 ResidualUnitary::rotation() const {
  return kind_ == Kind::kDiagonalPhase ? rotation_about_z(2.0 * omega_) : induced_rotation(matrix());
}

// ---------------------------------------------------------------------------
// Correlations

Vec3 Correlations::local(int i) const {
  const int n = num_qubits();
  Vec3 v;
  for (int a = 0; a < 3; ++a) v(a) = (*coeffs_)[offset_of(n, {{i, a + 1}})];
  return v;
}

Matrix3 Correlations::pair(int i, int j) const {
  const int n = num_qubits();
  Matrix3 m;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) m(a, b) = (*coeffs_)[offset_of(n, {{i, a + 1}, {j, b + 1}})];
  }
  return m;
}

Tensor3 Correlations::triple(int i, int j, int k) const {
  const int n = num_qubits();
  Tensor3 t{};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        t[a][b][c] = (*coeffs_)[offset_of(n, {{i, a + 1}, {j, b + 1}, {k, c + 1}})];
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// CorrelationBlock

CorrelationBlock CorrelationBlock::extract(const PauliCoefficients& ref,
                                           const PauliCoefficients& ref_prime, int i, int j) {
  const int n = ref.num_qubits();
  if (ref_prime.num_qubits() != n) {
    throw Error(ErrorCode::kArityMismatch, "reference forms have different qubit counts");
  }
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
    throw Error(ErrorCode::kIndexOutOfRange, "block needs two distinct qubits in range");
  }
  CorrelationBlock block;
  block.qubit_i = i;
  block.qubit_j = j;
  block.ref = Correlations(ref).pair(i, j);
  block.ref_prime = Correlations(ref_prime).pair(i, j);
  return block;
}

Matrix3 CorrelationBlock::oriented(int target, bool prime) const {
  const Matrix3& m = prime ? ref_prime : ref;
  if (target == qubit_i) return m;
  if (target == qubit_j) return m.transpose();
  throw Error(ErrorCode::kIndexOutOfRange, "qubit is not part of the block");
}

int CorrelationBlock::partner_of(int target) const {
  if (target == qubit_i) return qubit_j;
  if (target == qubit_j) return qubit_i;
  throw Error(ErrorCode::kIndexOutOfRange, "qubit is not part of the block");
}

// ---------------------------------------------------------------------------
// Weak qubit against one partner

double solve_omega_pairwise(const CorrelationBlock& block, int target, const Tolerances& tol) {
  const Matrix3 b = block.oriented(target, false);
  const Matrix3 bp = block.oriented(target, true);
  const Eigen::Vector2d x(b(0, 2), b(1, 2));
  const Eigen::Vector2d y(bp(0, 2), bp(1, 2));
  const double den = x.squaredNorm();
  if (den <= tol.coef * tol.coef) {
    throw Error(ErrorCode::kVanishingDenominator, "r_{1,3}^2 + r_{2,3}^2 vanishes");
  }
  if (std::abs(bp(2, 2) - b(2, 2)) > tol.coef) {
    throw Error(ErrorCode::kInconsistentCoefficients,
                "r'_{3,3} differs from r_{3,3} by " + std::to_string(bp(2, 2) - b(2, 2)));
  }
  if (std::abs(y.norm() - x.norm()) > tol.coef) {
    throw Error(ErrorCode::kInconsistentCoefficients,
                "transverse (.,3) slices differ in norm by " + std::to_string(y.norm() - x.norm()));
  }
  // y = R(2 omega) x with R the planar rotation realised by the diagonal phase.
  const double c = x.dot(y) / den;
  const double s = (x(0) * y(1) - x(1) * y(0)) / den;
  return wrap(0.5 * std::atan2(s, c), kPi);
}

Eigen::Matrix4d phase_system_matrix(const CorrelationBlock& block, int target) {
  const Matrix3 r = block.oriented(target, false);
  const double r11 = r(0, 0), r12 = r(0, 1), r21 = r(1, 0), r22 = r(1, 1);
  Eigen::Matrix4d m;
  m << r11, -r12, -r21, r22,
       r22, r21, r12, r11,
       r12, r11, -r22, -r21,
       r21, -r22, r11, -r12;
  return m;
}

Eigen::Vector4d phase_system_rhs(const CorrelationBlock& block, int target) {
  const Matrix3 r = block.oriented(target, true);
  return Eigen::Vector4d(r(0, 0), r(1, 1), r(0, 1), r(1, 0));
}

PhasePairSolution solve_omega_linear_system(const CorrelationBlock& block, int target,
                                            const Tolerances& tol,
                                            std::optional<double> known_partner_omega) {
  const Eigen::Matrix2d b = block.oriented(target, false).topLeftCorner<2, 2>();
  const Eigen::Matrix2d bp = block.oriented(target, true).topLeftCorner<2, 2>();
  if (b.cwiseAbs().maxCoeff() <= tol.coef && bp.cwiseAbs().maxCoeff() <= tol.coef) {
    throw Error(ErrorCode::kAllCoefficientsVanish, "transverse 2x2 block vanishes");
  }

  // The block transforms as B' = R(a) B R(b)^T with a = 2 omega_target and
  // b = 2 omega_partner. Its rotation-like part p = (B11+B22, B21-B12)/2 turns
  // by a - b, its reflection-like part q = (B11-B22, B12+B21)/2 by a + b.
  const Complex p(0.5 * (b(0, 0) + b(1, 1)), 0.5 * (b(1, 0) - b(0, 1)));
  const Complex q(0.5 * (b(0, 0) - b(1, 1)), 0.5 * (b(0, 1) + b(1, 0)));
  const Complex pp(0.5 * (bp(0, 0) + bp(1, 1)), 0.5 * (bp(1, 0) - bp(0, 1)));
  const Complex qp(0.5 * (bp(0, 0) - bp(1, 1)), 0.5 * (bp(0, 1) + bp(1, 0)));
  if (std::abs(std::abs(pp) - std::abs(p)) > tol.coef ||
      std::abs(std::abs(qp) - std::abs(q)) > tol.coef) {
    throw Error(ErrorCode::kNoConsistentSolution,
                "block invariants |p|, |q| differ between the reference forms");
  }

  PhasePairSolution sol;
  double a = 0.0;
  double beta = 0.0;
  if (known_partner_omega) {
    beta = 2.0 * *known_partner_omega;
    const Eigen::Matrix2d x = b * Eigen::Rotation2Dd(beta).toRotationMatrix().transpose();
    double sc = 0.0, ss = 0.0;
    for (int k = 0; k < 2; ++k) {
      sc += x.col(k).dot(bp.col(k));
      ss += x(0, k) * bp(1, k) - x(1, k) * bp(0, k);
    }
    a = std::atan2(ss, sc);
    sol.family = PhasePairSolution::Family::kPartnerGiven;
    sol.omega_target = wrap(0.5 * a, kPi);
    sol.omega_partner = wrap(*known_partner_omega, kPi);
  } else {
    const bool has_p = std::abs(p) > tol.coef;
    const bool has_q = std::abs(q) > tol.coef;
    const double diff = has_p ? std::arg(pp / p) : 0.0;
    const double sum = has_q ? std::arg(qp / q) : 0.0;
    if (has_p && has_q) {
      a = 0.5 * (sum + diff);
      beta = 0.5 * (sum - diff);
      // (a, beta) and (a + pi, beta + pi) solve the block equally well.
      const std::array<double, 2> first{wrap(0.5 * a, kPi), wrap(0.5 * beta, kPi)};
      const std::array<double, 2> second{wrap(0.5 * a + 0.5 * kPi, kPi),
                                         wrap(0.5 * beta + 0.5 * kPi, kPi)};
      const bool keep_first = first[0] <= second[0];
      const auto& chosen = keep_first ? first : second;
      sol.omega_target = chosen[0];
      sol.omega_partner = chosen[1];
      sol.alternative = keep_first ? second : first;
      sol.family = PhasePairSolution::Family::kUnique;
    } else if (has_q) {
      sol.family = PhasePairSolution::Family::kSumFixed;
      sol.omega_target = 0.0;
      sol.omega_partner = wrap(0.5 * sum, kPi);
    } else {
      sol.family = PhasePairSolution::Family::kDifferenceFixed;
      sol.omega_target = 0.0;
      sol.omega_partner = wrap(-0.5 * diff, kPi);
    }
    a = 2.0 * sol.omega_target;
    beta = 2.0 * sol.omega_partner;
  }

  const Eigen::Vector4d x(std::cos(a) * std::cos(beta), std::cos(a) * std::sin(beta),
                          std::sin(a) * std::cos(beta), std::sin(a) * std::sin(beta));
  sol.residual = (phase_system_matrix(block, target) * x - phase_system_rhs(block, target)).norm();
  if (sol.residual > tol.solve) {
    throw Error(ErrorCode::kNoConsistentSolution,
                "phase system residual " + std::to_string(sol.residual));
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Strong qubit against a weak partner

SU2Params solve_rotation_for_strong_qubit(const CorrelationBlock& block, int strong,
                                          const Tolerances& tol) {
  const Vec3 x = block.oriented(strong, false).col(2);
  const Vec3 y = block.oriented(strong, true).col(2);
  const double nx = x.norm();
  const double ny = y.norm();
  if (nx <= tol.coef) throw Error(ErrorCode::kVanishingSlice, "(.,3) slice vanishes");
  if (std::abs(ny - nx) > tol.coef) {
    throw Error(ErrorCode::kNormMismatch,
                "slices differ in norm by " + std::to_string(ny - nx));
  }
  const Vec3 u = x / nx;
  const Vec3 v = y / ny;
  const double dot = std::clamp(u.dot(v), -1.0, 1.0);
  const Vec3 cross = v.cross(u);

  std::vector<SU2Params> candidates;
  if (cross.norm() > 1e-12) {
    const Vec3 n = cross.normalized();
    double az = std::atan2(n(1), n(0));
    if (az < 0.0) az += 2.0 * kPi;
    SU2Params full{std::acos(dot), std::acos(std::clamp(n(2), -1.0, 1.0)), wrap(az, 2.0 * kPi)};
    candidates.push_back(full);
    // Half-angle reading of the same quantities.
    candidates.push_back({0.5 * full.phi, 0.5 * full.theta, 0.5 * full.phi_az});
  } else if (dot > 0.0) {
    candidates.push_back({});
  } else {
    // Antiparallel: a half turn about any axis orthogonal to the slice.
    Eigen::Index k = 0;
    u.cwiseAbs().minCoeff(&k);
    const Vec3 n = u.cross(Vec3::Unit(k)).normalized();
    double az = std::atan2(n(1), n(0));
    if (az < 0.0) az += 2.0 * kPi;
    candidates.push_back({kPi, std::acos(std::clamp(n(2), -1.0, 1.0)), wrap(az, 2.0 * kPi)});
  }
  for (const auto& c : candidates) {
    if ((induced_rotation(su2_from_params(c)) * u - v).norm() <= 1e-8) return c;
  }
  throw Error(ErrorCode::kNoSolutionFound, "no rotation candidate maps the slices");
}

// ---------------------------------------------------------------------------
// All-strong pair

StrongPairSolution solve_all_strong(const CorrelationBlock& block, const Tolerances& tol) {
  const Matrix3& c = block.ref;
  const Matrix3& cp = block.ref_prime;
  if (c.cwiseAbs().maxCoeff() <= tol.coef && cp.cwiseAbs().maxCoeff() <= tol.coef) {
    throw Error(ErrorCode::kAllCoefficientsVanish, "3x3 correlation blocks vanish");
  }

  auto fit_second = [&](const Rotation3& ri) {
    // C'^T = R_j (C^T R_i^T)
    return kabsch(c.transpose() * ri.transpose(), cp.transpose());
  };
  auto residual_of = [&](const Rotation3& ri, const Rotation3& rj) {
    return (cp - ri * c * rj.transpose()).norm();
  };

  struct Start {
    Rotation3 ri;
    Rotation3 rj;
    double residual;
    int index;
  };
  std::vector<Start> starts;
  constexpr int kGrid = 16;
  starts.reserve(kGrid * kGrid * kGrid + 1);
  {
    const Rotation3 id = Rotation3::Identity();
    const Rotation3 rj = fit_second(id);
    starts.push_back({id, rj, residual_of(id, rj), 0});
  }
  for (int a = 0; a < kGrid; ++a) {
    for (int t = 0; t < kGrid; ++t) {
      for (int z = 0; z < kGrid; ++z) {
        const SU2Params p{(a + 0.5) * kPi / kGrid, (t + 0.5) * kPi / kGrid, z * 2.0 * kPi / kGrid};
        const Rotation3 ri = induced_rotation(su2_from_params(p));
        const Rotation3 rj = fit_second(ri);
        starts.push_back({ri, rj, residual_of(ri, rj), static_cast<int>(starts.size())});
      }
    }
  }
  std::stable_sort(starts.begin(), starts.end(),
                   [](const Start& l, const Start& r) { return l.residual < r.residual; });

  constexpr int kRefined = 8;
  constexpr int kMaxSteps = 200;
  Start best = starts.front();
  for (int s = 0; s < std::min<int>(kRefined, static_cast<int>(starts.size())); ++s) {
    const Start& seed = starts[static_cast<std::size_t>(s)];
    Eigen::VectorXd x = Eigen::VectorXd::Zero(6);
    auto f = [&](const Eigen::VectorXd& v) {
      const Rotation3 ri = exp_so3(v.head<3>()) * seed.ri;
      const Rotation3 rj = exp_so3(v.tail<3>()) * seed.rj;
      const Matrix3 d = cp - ri * c * rj.transpose();
      return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(d.data(), 9));
    };
    const double res = levenberg_marquardt(x, f, kMaxSteps, tol.solve);
    const Start refined{exp_so3(x.head<3>()) * seed.ri, exp_so3(x.tail<3>()) * seed.rj, res,
                        seed.index};
    if (refined.residual < best.residual ||
        (refined.residual == best.residual && refined.index < best.index)) {
      best = refined;
    }
    if (best.residual <= tol.solve) break;
  }
  if (best.residual > tol.solve) {
    throw Error(ErrorCode::kNoSolutionFound,
                "best residual " + std::to_string(best.residual) + " after refinement");
  }
  return {su2_params_from_rotation(best.ri), su2_params_from_rotation(best.rj), best.residual};
}

// ---------------------------------------------------------------------------
// Anchoring and escalation

std::optional<ResidualUnitary> anchor_qubit(const Correlations& ref, const Correlations& ref_prime,
                                            int qubit, bool strong,
                                            const PartialResiduals& solved, int max_order,
                                            const Tolerances& tol, int* rank) {
  const int n = ref.num_qubits();
  std::vector<Vec3> xs;
  std::vector<Vec3> ys;
  std::vector<Rotation3> rot(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    if (solved[static_cast<std::size_t>(k)]) rot[static_cast<std::size_t>(k)] = solved[static_cast<std::size_t>(k)]->rotation();
  }
  auto is_solved = [&](int k) { return k != qubit && solved[static_cast<std::size_t>(k)].has_value(); };

  if (max_order >= 2) {
    for (int k = 0; k < n; ++k) {
      if (!is_solved(k)) continue;
      const Matrix3 x = ref.pair(qubit, k) * rot[static_cast<std::size_t>(k)].transpose();
      const Matrix3 y = ref_prime.pair(qubit, k);
      for (int b = 0; b < 3; ++b) {
        xs.push_back(x.col(b));
        ys.push_back(y.col(b));
      }
    }
  }
  if (max_order >= 3) {
    for (int k = 0; k < n; ++k) {
      if (!is_solved(k)) continue;
      for (int l = k + 1; l < n; ++l) {
        if (!is_solved(l)) continue;
        const Tensor3 t = ref.triple(qubit, k, l);
        const Tensor3 tp = ref_prime.triple(qubit, k, l);
        const Rotation3& rk = rot[static_cast<std::size_t>(k)];
        const Rotation3& rl = rot[static_cast<std::size_t>(l)];
        for (int b = 0; b < 3; ++b) {
          for (int cc = 0; cc < 3; ++cc) {
            Vec3 x = Vec3::Zero();
            Vec3 y;
            for (int a = 0; a < 3; ++a) {
              for (int b2 = 0; b2 < 3; ++b2) {
                for (int c2 = 0; c2 < 3; ++c2) x(a) += rk(b, b2) * rl(cc, c2) * t[a][b2][c2];
              }
              y(a) = tp[a][b][cc];
            }
            xs.push_back(x);
            ys.push_back(y);
          }
        }
      }
    }
  }

  const int axes = active_axes(strong);
  Eigen::MatrixXd xm(axes, static_cast<Eigen::Index>(xs.size()));
  for (std::size_t k = 0; k < xs.size(); ++k) xm.col(static_cast<Eigen::Index>(k)) = xs[k].head(axes);
  const int r = numeric_rank(xm, tol.coef);
  if (rank) *rank = r;
  if (r == 0) return std::nullopt;

  if (!strong) {
    double sc = 0.0, ss = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sc += xs[k](0) * ys[k](0) + xs[k](1) * ys[k](1);
      ss += xs[k](0) * ys[k](1) - xs[k](1) * ys[k](0);
    }
    return ResidualUnitary::phase(wrap(0.5 * std::atan2(ss, sc), kPi));
  }
  Eigen::Matrix3Xd x(3, static_cast<Eigen::Index>(xs.size()));
  Eigen::Matrix3Xd y(3, static_cast<Eigen::Index>(ys.size()));
  for (std::size_t k = 0; k < xs.size(); ++k) {
    x.col(static_cast<Eigen::Index>(k)) = xs[k];
    y.col(static_cast<Eigen::Index>(k)) = ys[k];
  }
  return ResidualUnitary::general(su2_params_from_rotation(kabsch(x, y)));
}

bool qubit_is_free(const PauliCoefficients& ref, const PauliCoefficients& ref_prime, int qubit,
                   bool strong, double coef_tol) {
  const int n = ref.num_qubits();
  const int shift = 2 * (n - 1 - qubit);
  for (std::size_t off = 0; off < ref.size(); ++off) {
    const auto axis = (off >> shift) & 3u;
    const bool acted_on = strong ? axis != 0 : (axis == 1 || axis == 2);
    if (!acted_on) continue;
    if (std::abs(ref[off]) > coef_tol || std::abs(ref_prime[off]) > coef_tol) return false;
  }
  return true;
}

namespace {

// Coefficients of the state with every qubit rotated: T -> (R_0 (x) ...) T.
std::vector<double> rotate_coefficients(const PauliCoefficients& coeffs,
                                        const std::vector<Rotation3>& rot) {
  const int n = coeffs.num_qubits();
  std::vector<double> r = coeffs.values();
  for (int q = 0; q < n; ++q) {
    const std::size_t stride = std::size_t{1} << (2 * (n - 1 - q));
    const Rotation3& m = rot[static_cast<std::size_t>(q)];
    for (std::size_t base = 0; base < r.size(); ++base) {
      if ((base / stride) % 4 != 0) continue;
      const Vec3 v(r[base + stride], r[base + 2 * stride], r[base + 3 * stride]);
      const Vec3 w = m * v;
      for (int a = 0; a < 3; ++a) r[base + static_cast<std::size_t>(a + 1) * stride] = w(a);
    }
  }
  return r;
}

// Residual vector of T' = (x) R T over every correlation of order
// 1..max_order that involves at least one qubit flagged in \p involved (all
// of them when \p involved is empty).
Eigen::VectorXd correlation_equations(const Correlations& ref, const Correlations& ref_prime,
                                      const std::vector<Rotation3>& rot, int max_order,
                                      const std::vector<bool>& involved) {
  const int n = ref.num_qubits();
  const std::vector<double> t = rotate_coefficients(ref.coefficients(), rot);
  const PauliCoefficients& tp = ref_prime.coefficients();
  std::vector<double> out;
  for (std::size_t off = 1; off < t.size(); ++off) {
    int order = 0;
    bool touches = involved.empty();
    for (int q = 0; q < n; ++q) {
      if (((off >> (2 * (n - 1 - q))) & 3u) == 0) continue;
      ++order;
      if (!touches && involved[static_cast<std::size_t>(q)]) touches = true;
    }
    if (order > max_order || !touches) continue;
    out.push_back(tp[off] - t[off]);
  }
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

}  // namespace

double correlation_residual(const Correlations& ref, const Correlations& ref_prime,
                            const std::vector<Rotation3>& rotations, int max_order) {
  return correlation_equations(ref, ref_prime, rotations, max_order, {}).norm();
}

double refine_residuals(const Correlations& ref, const Correlations& ref_prime,
                        const std::vector<bool>& strong, const std::vector<bool>& free_qubits,
                        std::vector<ResidualUnitary>& residuals, int max_order, int max_steps,
                        double target) {
  const int n = ref.num_qubits();
  std::vector<Rotation3> base(static_cast<std::size_t>(n));
  std::vector<int> param_offset(static_cast<std::size_t>(n), -1);
  int count = 0;
  for (int q = 0; q < n; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    base[uq] = residuals[uq].rotation();
    if (!free_qubits[uq]) continue;
    param_offset[uq] = count;
    count += strong[uq] ? 3 : 1;
  }
  auto rotations_at = [&](const Eigen::VectorXd& v) {
    std::vector<Rotation3> rot = base;
    for (int q = 0; q < n; ++q) {
      const auto uq = static_cast<std::size_t>(q);
      const int o = param_offset[uq];
      if (o < 0) continue;
      if (strong[uq]) {
        rot[uq] = exp_so3(v.segment<3>(o)) * base[uq];
      } else {
        rot[uq] = rotation_about_z(2.0 * residuals[uq].omega() + v(o));
      }
    }
    return rot;
  };
  Eigen::VectorXd x = Eigen::VectorXd::Zero(count);
  if (count > 0) {
    auto f = [&](const Eigen::VectorXd& v) {
      return correlation_equations(ref, ref_prime, rotations_at(v), max_order, free_qubits);
    };
    levenberg_marquardt(x, f, max_steps, target);
  }
  const auto rot = rotations_at(x);
  for (int q = 0; q < n; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    const int o = param_offset[uq];
    if (o < 0) continue;
    residuals[uq] = strong[uq]
                        ? ResidualUnitary::general(su2_params_from_rotation(rot[uq]))
                        : ResidualUnitary::phase(wrap(residuals[uq].omega() + 0.5 * x(o), kPi));
  }
  return correlation_residual(ref, ref_prime, rot, max_order);
}

PartialResiduals escalate_order(const PauliCoefficients& ref, const PauliCoefficients& ref_prime,
                                const std::vector<bool>& strong, PartialResiduals solved,
                                const Tolerances& tol) {
  const int n = ref.num_qubits();
  const Correlations cr(ref);
  const Correlations cp(ref_prime);

  auto order2_vanishes = [&](int u) {
    const int axes = active_axes(strong[static_cast<std::size_t>(u)]);
    for (int v = 0; v < n; ++v) {
      if (v == u) continue;
      const Matrix3 a = cr.pair(u, v);
      const Matrix3 b = cp.pair(u, v);
      if (a.topRows(axes).cwiseAbs().maxCoeff() > tol.coef ||
          b.topRows(axes).cwiseAbs().maxCoeff() > tol.coef) {
        return false;
      }
    }
    return true;
  };

  std::vector<bool> target(static_cast<std::size_t>(n), false);
  for (int u = 0; u < n; ++u) {
    const auto uu = static_cast<std::size_t>(u);
    if (solved[uu] || !order2_vanishes(u)) continue;
    if (qubit_is_free(ref, ref_prime, u, strong[uu], tol.coef)) {
      solved[uu] = ResidualUnitary::identity(strong[uu]);
      continue;
    }
    target[uu] = true;
  }

  // Anchor against solved qubits through order-3 tensors until no progress.
  bool progress = true;
  while (progress) {
    progress = false;
    for (int u = 0; u < n; ++u) {
      const auto uu = static_cast<std::size_t>(u);
      if (!target[uu] || solved[uu]) continue;
      if (auto r = anchor_qubit(cr, cp, u, strong[uu], solved, 3, tol)) {
        solved[uu] = *r;
        progress = true;
      }
    }
  }

  std::vector<bool> stuck(static_cast<std::size_t>(n), false);
  bool any_stuck = false;
  for (int u = 0; u < n; ++u) {
    const auto uu = static_cast<std::size_t>(u);
    stuck[uu] = target[uu] && !solved[uu];
    any_stuck = any_stuck || stuck[uu];
  }
  if (!any_stuck) return solved;
  if (n < 3) {
    throw Error(ErrorCode::kOrderLimitExceeded, "coefficients vanish through the available order");
  }

  bool order3_vanishes = true;
  for (int u = 0; u < n && order3_vanishes; ++u) {
    if (!stuck[static_cast<std::size_t>(u)]) continue;
    for (int k = 0; k < n && order3_vanishes; ++k) {
      for (int l = k + 1; l < n && order3_vanishes; ++l) {
        if (k == u || l == u) continue;
        const Tensor3 t = cr.triple(u, k, l);
        const Tensor3 tp = cp.triple(u, k, l);
        for (int a = 0; a < active_axes(strong[static_cast<std::size_t>(u)]); ++a)
          for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
              if (std::abs(t[a][b][c]) > tol.coef || std::abs(tp[a][b][c]) > tol.coef) order3_vanishes = false;
      }
    }
  }
  if (order3_vanishes) {
    throw Error(ErrorCode::kOrderLimitExceeded, "all correlation coefficients through order 3 vanish");
  }
  // Nothing to anchor against: solve the stuck qubits jointly from order-3
  // equations, other unsolved qubits held at the identity.
  std::vector<ResidualUnitary> base(static_cast<std::size_t>(n));
  std::vector<bool> free_qubits(static_cast<std::size_t>(n), false);
  for (int u = 0; u < n; ++u) {
    const auto uu = static_cast<std::size_t>(u);
    base[uu] = solved[uu] ? *solved[uu] : ResidualUnitary::identity(strong[uu]);
    free_qubits[uu] = stuck[uu];
  }
  std::mt19937_64 rng(0x6c75657175ull);
  std::vector<ResidualUnitary> best;
  double best_res = std::numeric_limits<double>::infinity();
  constexpr int kStarts = 32;
  for (int s = 0; s < kStarts && best_res > tol.solve; ++s) {
    std::vector<ResidualUnitary> trial = base;
    if (s > 0) {
      for (int u = 0; u < n; ++u) {
        const auto uu = static_cast<std::size_t>(u);
        if (!stuck[uu]) continue;
        const Rotation3 r = random_rotation(rng);
        trial[uu] = strong[uu] ? ResidualUnitary::general(su2_params_from_rotation(r))
                               : ResidualUnitary::phase(std::uniform_real_distribution<double>(0.0, kPi)(rng));
      }
    }
    const double res = refine_residuals(cr, cp, strong, free_qubits, trial, 3, 200, tol.solve);
    if (res < best_res) {
      best_res = res;
      best = trial;
    }
  }
  for (int u = 0; u < n; ++u) {
    const auto uu = static_cast<std::size_t>(u);
    if (stuck[uu]) solved[uu] = best[uu];
  }
  return solved;
}

}  // namespace lueq
