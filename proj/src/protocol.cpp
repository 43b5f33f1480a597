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
#include "lueq/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lueq/error.hpp"
#include "lueq/local_ops.hpp"
#include "lueq/oracle.hpp"
#include "lueq/pauli.hpp"
#include "lueq/reduction.hpp"
#include "lueq/reference_form.hpp"

namespace lueq {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string angle_text(const ResidualUnitary& r) {
  if (r.kind() == ResidualUnitary::Kind::kDiagonalPhase) return "omega=" + fmt(r.omega());
  const SU2Params& p = r.params();
  return "phi=" + fmt(p.phi) + " theta=" + fmt(p.theta) + " phi_az=" + fmt(p.phi_az);
}

bool spectra_match(const Diagonalization& d, const Diagonalization& dp, double tol) {
  return std::abs(dp.lambda1 - d.lambda1) <= tol && std::abs(dp.lambda2 - d.lambda2) <= tol;
}

// Per-qubit residual solving on the reference forms. Throws the angle-solver
// errors; the caller turns them into verdicts.
class ResidualSolver {
 public:
  ResidualSolver(const PauliCoefficients& ref, const PauliCoefficients& ref_prime,
                 std::vector<bool> strong, const Tolerances& tol, std::uint64_t seed,
                 PipelineTrace& trace)
      : ref_(ref), ref_prime_(ref_prime), cr_(ref), cp_(ref_prime), strong_(std::move(strong)),
        tol_(tol), seed_(seed), trace_(trace), n_(ref.num_qubits()),
        sol_(static_cast<std::size_t>(n_)), soft_(static_cast<std::size_t>(n_), false) {}

  std::vector<ResidualUnitary> run() {
    solve_weak_pairwise();
    solve_weak_linear();
    solve_strong_with_weak_partner();
    anchor_remaining();
    escalate();
    fill_unsolved();
    resolve_alternatives();
    polish();
    std::vector<ResidualUnitary> out;
    for (int q = 0; q < n_; ++q) out.push_back(*sol_[idx(q)]);
    return out;
  }

 private:
  static std::size_t idx(int q) { return static_cast<std::size_t>(q); }
  bool is_strong(int q) const { return strong_[idx(q)]; }

  void record(int q, ResidualUnitary r, const std::string& method, std::optional<int> partner) {
    sol_[idx(q)] = r;
    auto& rec = trace_.qubits[idx(q)];
    rec.method = method;
    rec.partner = partner;
    std::string line = "qubit " + std::to_string(q + 1) + ": " + method;
    if (partner) line += " with qubit " + std::to_string(*partner + 1);
    trace_.log.push_back(line + ", " + angle_text(r));
  }

  CorrelationBlock block(int i, int j) const { return CorrelationBlock::extract(ref_, ref_prime_, i, j); }

  // Squared norm of the transverse (.,3) slice of \p i against \p j.
  double slice_weight(int i, int j, int rows) const {
    const Matrix3 a = cr_.pair(i, j);
    const Matrix3 b = cp_.pair(i, j);
    return std::max(a.col(2).head(rows).squaredNorm(), b.col(2).head(rows).squaredNorm());
  }

  void solve_weak_pairwise() {
    for (int i = 0; i < n_; ++i) {
      if (is_strong(i)) continue;
      int best = -1;
      double best_w = tol_.coef * tol_.coef;
      for (int j = 0; j < n_; ++j) {
        if (j == i || is_strong(j)) continue;
        const double w = cr_.pair(i, j).col(2).head(2).squaredNorm();
        if (w > best_w) {
          best_w = w;
          best = j;
        }
      }
      if (best < 0) continue;
      const double omega = solve_omega_pairwise(block(i, best), i, tol_);
      record(i, ResidualUnitary::phase(omega), "pairwise", best);
    }
  }

  void solve_weak_linear() {
    for (int i = 0; i < n_; ++i) {
      if (is_strong(i) || sol_[idx(i)]) continue;
      int best = -1;
      double best_w = tol_.coef;
      for (int j = 0; j < n_; ++j) {
        if (j == i || is_strong(j)) continue;
        const double w = std::max(cr_.pair(i, j).topLeftCorner<2, 2>().cwiseAbs().maxCoeff(),
                                  cp_.pair(i, j).topLeftCorner<2, 2>().cwiseAbs().maxCoeff());
        if (w > best_w) {
          best_w = w;
          best = j;
        }
      }
      if (best < 0) continue;
      const auto& partner = sol_[idx(best)];
      std::optional<double> known;
      if (partner) known = partner->omega();
      const PhasePairSolution s = solve_omega_linear_system(block(i, best), i, tol_, known);
      record(i, ResidualUnitary::phase(s.omega_target), "linear system", best);
      if (!known) {
        record(best, ResidualUnitary::phase(s.omega_partner), "linear system", i);
        if (s.family != PhasePairSolution::Family::kUnique) {
          soft_[idx(i)] = true;
          soft_[idx(best)] = true;
          trace_.log.push_back("qubits " + std::to_string(i + 1) + "," + std::to_string(best + 1) +
                               ": one-parameter family, canonical member chosen");
        }
        if (s.alternative) alternatives_.push_back({i, best, *s.alternative});
      }
    }
  }

  void solve_strong_with_weak_partner() {
    for (int i = 0; i < n_; ++i) {
      if (!is_strong(i) || sol_[idx(i)]) continue;
      int best = -1;
      double best_w = tol_.coef * tol_.coef;
      for (int j = 0; j < n_; ++j) {
        if (j == i || is_strong(j)) continue;
        const double w = slice_weight(i, j, 3);
        if (w > best_w) {
          best_w = w;
          best = j;
        }
      }
      if (best < 0) continue;
      const SU2Params p = solve_rotation_for_strong_qubit(block(i, best), i, tol_);
      int rank = 0;
      const auto anchored = anchor_qubit(cr_, cp_, i, true, sol_, 3, tol_, &rank);
      if (anchored && rank >= 2) {
        record(i, *anchored, "rotation fit", best);
      } else {
        record(i, ResidualUnitary::general(p), "slice rotation", best);
        soft_[idx(i)] = true;
      }
    }
  }

  void anchor_remaining() {
    for (;;) {
      bool changed = false;
      for (int u = 0; u < n_; ++u) {
        if (sol_[idx(u)]) continue;
        int rank = 0;
        if (auto r = anchor_qubit(cr_, cp_, u, is_strong(u), sol_, 3, tol_, &rank)) {
          record(u, *r, "anchored", std::nullopt);
          if (is_strong(u) && rank < 2) soft_[idx(u)] = true;
          changed = true;
        }
      }
      if (changed) continue;
      // Nothing to anchor against: seed the strongest pair of unsolved
      // maximally mixed qubits.
      int bi = -1, bj = -1;
      double best_w = tol_.coef;
      for (int i = 0; i < n_; ++i) {
        for (int j = i + 1; j < n_; ++j) {
          if (!is_strong(i) || !is_strong(j) || sol_[idx(i)] || sol_[idx(j)]) continue;
          const double w = std::max(cr_.pair(i, j).cwiseAbs().maxCoeff(),
                                    cp_.pair(i, j).cwiseAbs().maxCoeff());
          if (w > best_w) {
            best_w = w;
            bi = i;
            bj = j;
          }
        }
      }
      if (bi < 0) return;
      const StrongPairSolution s = solve_all_strong(block(bi, bj), tol_);
      record(bi, ResidualUnitary::general(s.first), "strong pair", bj);
      record(bj, ResidualUnitary::general(s.second), "strong pair", bi);
      soft_[idx(bi)] = true;
      soft_[idx(bj)] = true;
    }
  }

  void escalate() {
    PartialResiduals before = sol_;
    sol_ = escalate_order(ref_, ref_prime_, strong_, std::move(sol_), tol_);
    for (int q = 0; q < n_; ++q) {
      if (before[idx(q)] || !sol_[idx(q)]) continue;
      const bool free = qubit_is_free(ref_, ref_prime_, q, is_strong(q), tol_.coef);
      record(q, *sol_[idx(q)], free ? "free" : "order-3 tensors", std::nullopt);
      if (!free) soft_[idx(q)] = true;
    }
  }

  void fill_unsolved() {
    for (int q = 0; q < n_; ++q) {
      if (sol_[idx(q)]) continue;
      record(q, ResidualUnitary::identity(is_strong(q)), "joint fit seed", std::nullopt);
      soft_[idx(q)] = true;
    }
  }

  std::vector<Rotation3> rotations() const {
    std::vector<Rotation3> r;
    for (int q = 0; q < n_; ++q) r.push_back(sol_[idx(q)]->rotation());
    return r;
  }

  double residual() const { return correlation_residual(cr_, cp_, rotations(), n_); }

  void resolve_alternatives() {
    for (const auto& alt : alternatives_) {
      const double current = residual();
      const auto keep_i = sol_[idx(alt.i)];
      const auto keep_j = sol_[idx(alt.j)];
      sol_[idx(alt.i)] = ResidualUnitary::phase(alt.omegas[0]);
      sol_[idx(alt.j)] = ResidualUnitary::phase(alt.omegas[1]);
      if (residual() < current) {
        trace_.log.push_back("qubits " + std::to_string(alt.i + 1) + "," + std::to_string(alt.j + 1) +
                             ": switched to the pi/2-shifted solution");
        trace_.qubits[idx(alt.i)].residual = sol_[idx(alt.i)];
      } else {
        sol_[idx(alt.i)] = keep_i;
        sol_[idx(alt.j)] = keep_j;
      }
    }
  }

  // Joint damped Newton polish over all correlation orders, first over the
  // qubits whose residual is only determined up to a family, then over all.
  void polish() {
    double best = residual();
    if (best <= tol_.solve) return;
    trace_.log.push_back("joint polish: correlation residual " + fmt(best));
    std::vector<ResidualUnitary> current;
    for (int q = 0; q < n_; ++q) current.push_back(*sol_[idx(q)]);

    std::mt19937_64 rng(seed_ ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, kPi);
    auto random_residual = [&](int q) {
      if (!is_strong(q)) return ResidualUnitary::phase(uni(rng));
      Eigen::Quaterniond h(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
      h.normalize();
      return ResidualUnitary::general(su2_params_from_rotation(h.toRotationMatrix()));
    };

    std::vector<ResidualUnitary> best_set = current;
    const std::vector<bool> all(static_cast<std::size_t>(n_), true);
    const bool any_soft = std::find(soft_.begin(), soft_.end(), true) != soft_.end();
    constexpr int kStarts = 24;
    for (int pass = any_soft ? 0 : 1; pass < 2 && best > tol_.solve; ++pass) {
      const std::vector<bool>& free = pass == 0 ? soft_ : all;
      for (int s = 0; s < kStarts && best > tol_.solve; ++s) {
        std::vector<ResidualUnitary> trial = best_set;
        if (s > 0) {
          for (int q = 0; q < n_; ++q) {
            if (free[idx(q)]) trial[idx(q)] = random_residual(q);
          }
        }
        const double r = refine_residuals(cr_, cp_, strong_, free, trial, n_, 200, tol_.solve);
        if (r < best) {
          best = r;
          best_set = trial;
        }
      }
    }
    for (int q = 0; q < n_; ++q) sol_[idx(q)] = best_set[idx(q)];
    trace_.log.push_back("joint polish: final correlation residual " + fmt(best));
  }

  struct Alternative {
    int i;
    int j;
    std::array<double, 2> omegas;
  };

  const PauliCoefficients& ref_;
  const PauliCoefficients& ref_prime_;
  Correlations cr_;
  Correlations cp_;
  std::vector<bool> strong_;
  const Tolerances& tol_;
  std::uint64_t seed_;
  PipelineTrace& trace_;
  int n_;
  PartialResiduals sol_;
  std::vector<bool> soft_;
  std::vector<Alternative> alternatives_;
};

bool is_solver_evidence(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInconsistentCoefficients:
    case ErrorCode::kNoConsistentSolution:
    case ErrorCode::kNormMismatch:
    case ErrorCode::kNoSolutionFound:
    case ErrorCode::kVanishingDenominator:
    case ErrorCode::kVanishingSlice:
    case ErrorCode::kAllCoefficientsVanish:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::optional<SpectrumMismatch> spectrum_gate(const MultiQubitState& rho,
                                              const MultiQubitState& rho_prime,
                                              const Tolerances& tol) {
  if (rho.num_qubits() != rho_prime.num_qubits()) {
    throw Error(ErrorCode::kArityMismatch, "states have different qubit counts");
  }
  for (int q = 0; q < rho.num_qubits(); ++q) {
    const Diagonalization d = diagonalize_qubit(single_qubit_marginal(rho, q), tol.degen);
    const Diagonalization dp = diagonalize_qubit(single_qubit_marginal(rho_prime, q), tol.degen);
    if (!spectra_match(d, dp, tol.degen)) return SpectrumMismatch{q, d, dp};
  }
  return std::nullopt;
}

double verify_equivalence(const MultiQubitState& ref, const MultiQubitState& ref_prime,
                          std::span<const ResidualUnitary> residuals) {
  if (ref.num_qubits() != ref_prime.num_qubits() ||
      static_cast<int>(residuals.size()) != ref.num_qubits()) {
    throw Error(ErrorCode::kArityMismatch, "one residual per qubit is required");
  }
  std::vector<Mat2> u;
  for (const auto& r : residuals) u.push_back(r.matrix());
  return (ref_prime.matrix() - conjugate_by_locals(ref.matrix(), u)).norm();
}

MultiQubitState apply_local_unitary(const MultiQubitState& rho, std::span<const Mat2> unitaries) {
  if (static_cast<int>(unitaries.size()) != rho.num_qubits()) {
    throw Error(ErrorCode::kArityMismatch, "expected " + std::to_string(rho.num_qubits()) +
                                               " unitaries, got " + std::to_string(unitaries.size()));
  }
  for (std::size_t k = 0; k < unitaries.size(); ++k) {
    if (unitarity_defect(unitaries[k]) > 1e-10) {
      throw Error(ErrorCode::kNonUnitaryInput, "factor " + std::to_string(k + 1) + " is not unitary");
    }
  }
  const ComplexMatrix out = conjugate_by_locals(rho.matrix(), unitaries);
  // Drop rounding asymmetry so the result survives a write/parse round trip unchanged.
  return MultiQubitState::assume_valid(0.5 * (out + out.adjoint()));
}

Mat2 normalize_global_phase(const Mat2& u) {
  Mat2 out = u / std::sqrt(u.determinant());
  for (int k = 0; k < 4; ++k) {
    const Complex z = out(k / 2, k % 2);
    if (std::abs(z) <= 1e-12) continue;
    const double a = std::arg(z);
    if (a <= -kPi / 2 || a > kPi / 2) out = -out;
    break;
  }
  return out;
}

bool is_equivalent(const Verdict& v) { return std::holds_alternative<Equivalent>(v); }

Decision decide_lu_equivalence(const MultiQubitState& rho, const MultiQubitState& rho_prime,
                               const DecideConfig& config) {
  const int n = rho.num_qubits();
  if (rho_prime.num_qubits() != n) {
    throw Error(ErrorCode::kArityMismatch, "states have different qubit counts");
  }
  const Tolerances& tol = config.tol;
  Decision out{Undecided{}, {}};
  PipelineTrace& trace = out.trace;

  // Marginals, their diagonalizations and the spectrum gate.
  for (int q = 0; q < n; ++q) {
    QubitRecord rec;
    const MultiQubitState m = single_qubit_marginal(rho, q);
    const MultiQubitState mp = single_qubit_marginal(rho_prime, q);
    rec.reduced = m.matrix();
    rec.reduced_prime = mp.matrix();
    rec.diag = diagonalize_qubit(m, tol.degen);
    rec.diag_prime = diagonalize_qubit(mp, tol.degen);
    rec.symmetry = rec.diag.degenerate ? SymmetryClass::kStrong : SymmetryClass::kWeak;
    trace.qubits.push_back(rec);
  }
  for (int q = 0; q < n; ++q) {
    const auto& rec = trace.qubits[static_cast<std::size_t>(q)];
    if (!spectra_match(rec.diag, rec.diag_prime, tol.degen)) {
      trace.log.push_back("spectrum gate: qubit " + std::to_string(q + 1) + " spectra (" +
                          fmt(rec.diag.lambda1) + ", " + fmt(rec.diag.lambda2) + ") vs (" +
                          fmt(rec.diag_prime.lambda1) + ", " + fmt(rec.diag_prime.lambda2) + ")");
      out.verdict = NotEquivalent{SpectrumMismatch{q, rec.diag, rec.diag_prime}};
      return out;
    }
  }
  trace.log.push_back("spectrum gate: passed");

  std::vector<bool> strong;
  std::vector<Mat2> v, vp;
  for (int q = 0; q < n; ++q) {
    const auto& rec = trace.qubits[static_cast<std::size_t>(q)];
    strong.push_back(rec.symmetry == SymmetryClass::kStrong);
    v.push_back(rec.diag.v);
    vp.push_back(rec.diag_prime.v);
    trace.log.push_back("qubit " + std::to_string(q + 1) + ": " +
                        (strong.back() ? "maximally mixed" : "not maximally mixed"));
  }

  const MultiQubitState ref = reference_form(rho, v);
  const MultiQubitState ref_prime = reference_form(rho_prime, vp);
  trace.reference = ref.matrix();
  trace.reference_prime = ref_prime.matrix();
  const PauliCoefficients cr = to_pauli_coefficients(ref, tol);
  const PauliCoefficients cp = to_pauli_coefficients(ref_prime, tol);

  const bool oracle_available = config.oracle != OracleMode::kOff && n <= 3;
  auto consult_oracle = [&]() -> std::optional<Equivalent> {
    if (!oracle_available) return std::nullopt;
    const OracleResult o = brute_force_lu_search(rho, rho_prime, config.oracle_budget, config.seed);
    const double rel = o.residual / rho.matrix().norm();
    trace.log.push_back("oracle: relative residual " + fmt(rel));
    if (rel > tol.verify) return std::nullopt;
    std::vector<Mat2> u;
    for (const auto& m : o.unitaries) u.push_back(normalize_global_phase(m));
    const double check =
        (rho_prime.matrix() - conjugate_by_locals(rho.matrix(), u)).norm() / rho.matrix().norm();
    if (check > tol.verify) return std::nullopt;
    trace.log.push_back("oracle found a conjugation the closed-form solve missed");
    return Equivalent{u, check};
  };

  std::vector<ResidualUnitary> residuals;
  try {
    residuals = ResidualSolver(cr, cp, strong, tol, config.seed, trace).run();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kOrderLimitExceeded) {
      trace.log.push_back(std::string("closed form: ") + e.what());
      // The reference forms may already coincide.
      std::vector<ResidualUnitary> identity;
      for (int q = 0; q < n; ++q) identity.push_back(ResidualUnitary::identity(strong[static_cast<std::size_t>(q)]));
      std::vector<Mat2> u;
      for (int q = 0; q < n; ++q) {
        const auto k = static_cast<std::size_t>(q);
        u.push_back(normalize_global_phase(vp[k] * v[k].adjoint()));
      }
      const double full =
          (rho_prime.matrix() - conjugate_by_locals(rho.matrix(), u)).norm() / rho.matrix().norm();
      if (full <= tol.verify) {
        for (int q = 0; q < n; ++q) trace.qubits[static_cast<std::size_t>(q)].residual = identity[static_cast<std::size_t>(q)];
        trace.log.push_back("identity residuals verify, relative residual " + fmt(full));
        out.verdict = Equivalent{u, full};
        return out;
      }
      if (auto eq = consult_oracle()) {
        out.verdict = *eq;
      } else {
        out.verdict = Undecided{config.oracle == OracleMode::kOff ? UndecidedReason::kOracleDisabled
                                                                  : UndecidedReason::kOrderLimitExceeded};
      }
      return out;
    }
    if (!is_solver_evidence(e.code())) throw;
    trace.log.push_back(std::string("solver: ") + e.what());
    if (auto eq = consult_oracle()) {
      out.verdict = *eq;
    } else {
      out.verdict = NotEquivalent{SolverEvidence{e.what()}};
    }
    return out;
  }

  for (int q = 0; q < n; ++q) trace.qubits[static_cast<std::size_t>(q)].residual = residuals[static_cast<std::size_t>(q)];
  const double ref_residual = verify_equivalence(ref, ref_prime, residuals);
  trace.log.push_back("reference-form residual " + fmt(ref_residual));

  std::vector<Mat2> u;
  for (int q = 0; q < n; ++q) {
    const auto k = static_cast<std::size_t>(q);
    u.push_back(normalize_global_phase(vp[k] * residuals[k].matrix() * v[k].adjoint()));
  }
  const double full =
      (rho_prime.matrix() - conjugate_by_locals(rho.matrix(), u)).norm() / rho.matrix().norm();
  trace.log.push_back("full-state relative residual " + fmt(full));
  if (full <= tol.verify) {
    out.verdict = Equivalent{u, full};
    return out;
  }
  if (auto eq = consult_oracle()) {
    out.verdict = *eq;
  } else {
    out.verdict = NotEquivalent{VerificationFailure{full}};
  }
  return out;
}

}  // namespace lueq
