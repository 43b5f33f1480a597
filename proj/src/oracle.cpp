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
#include "lueq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lueq/error.hpp"
#include "lueq/local_ops.hpp"
#include "lueq/pauli.hpp"

namespace lueq {

namespace {

Mat2 haar_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Vector4d q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  const Complex a(q(0), q(3));
  const Complex b(q(2), q(1));
  Mat2 u;
  u << a, -std::conj(b), b, std::conj(a);
  return u;
}

// exp(i s.sigma) for a real 3-vector s.
Mat2 exp_i_pauli(const Eigen::Ref<const Eigen::VectorXd>& s) {
  const double t = std::sqrt(s(0) * s(0) + s(1) * s(1) + s(2) * s(2));
  Mat2 u = Mat2::Identity() * std::cos(t);
  if (t < 1e-300) return u;
  const double k = std::sin(t) / t;
  const Complex i(0.0, 1.0);
  u(0, 0) += i * k * s(2);
  u(1, 1) -= i * k * s(2);
  u(0, 1) += i * k * Complex(s(0), -s(1));
  u(1, 0) += i * k * Complex(s(0), s(1));
  return u;
}

// Minimizes f from x0 with a Nelder-Mead simplex of edge \p step.
template <class F>
double nelder_mead(Eigen::VectorXd& x0, F&& f, double step, int max_evals, double target) {
  const Eigen::Index d = x0.size();
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(d + 1), x0);
  std::vector<double> val(static_cast<std::size_t>(d + 1));
  for (Eigen::Index k = 0; k < d; ++k) pts[static_cast<std::size_t>(k + 1)](k) += step;
  int evals = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    val[k] = f(pts[k]);
    ++evals;
  }
  std::vector<std::size_t> order(pts.size());
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    if (val[best] <= target || val[worst] - val[best] <= 1e-16 * (1.0 + val[best])) break;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (std::size_t k = 0; k + 1 < order.size(); ++k) centroid += pts[order[k]];
    centroid /= static_cast<double>(d);

    const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = f(xr);
    ++evals;
    if (fr < val[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
    } else if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
    } else {
      const bool outside = fr < val[worst];
      const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                         : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
      const double fc = f(xc);
      ++evals;
      if (fc < std::min(fr, val[worst])) {
        pts[worst] = xc;
        val[worst] = fc;
      } else {
        for (std::size_t k = 1; k < order.size(); ++k) {
          pts[order[k]] = pts[best] + 0.5 * (pts[order[k]] - pts[best]);
          val[order[k]] = f(pts[order[k]]);
          ++evals;
        }
      }
    }
  }
  const auto it = std::min_element(val.begin(), val.end());
  x0 = pts[static_cast<std::size_t>(it - val.begin())];
  return *it;
}

}  // namespace

OracleResult brute_force_lu_search(const MultiQubitState& rho, const MultiQubitState& rho_prime,
                                   int budget, std::uint64_t seed) {
  const int n = rho.num_qubits();
  if (n > 3) throw Error(ErrorCode::kTooManyQubits, "oracle search is limited to n <= 3");
  if (rho_prime.num_qubits() != n) {
    throw Error(ErrorCode::kArityMismatch, "states have different qubit counts");
  }
  const ComplexMatrix& a = rho.matrix();
  const ComplexMatrix& b = rho_prime.matrix();
  const double target = 1e-13 * std::max(1.0, b.norm());

  std::mt19937_64 rng(seed);
  std::vector<Mat2> best_u(static_cast<std::size_t>(n), Mat2::Identity());
  double best = std::numeric_limits<double>::infinity();

  auto unitaries_at = [&](const std::vector<Mat2>& base, const Eigen::VectorXd& x) {
    std::vector<Mat2> u(base.size());
    for (int q = 0; q < n; ++q) u[static_cast<std::size_t>(q)] = exp_i_pauli(x.segment(3 * q, 3)) * base[static_cast<std::size_t>(q)];
    return u;
  };

  constexpr int kCoarseEvals = 400 * 3;
  for (int s = 0; s < std::max(budget, 1) && best > target; ++s) {
    std::vector<Mat2> base(static_cast<std::size_t>(n), Mat2::Identity());
    if (s > 0) {
      for (auto& u : base) u = haar_su2(rng);
    }
    auto f = [&](const Eigen::VectorXd& x) {
      return (b - conjugate_by_locals(a, unitaries_at(base, x))).norm();
    };
    Eigen::VectorXd x = Eigen::VectorXd::Zero(3 * n);
    double r = nelder_mead(x, f, 0.4, kCoarseEvals * n, target);
    // Restart the simplex around the incumbent while it keeps improving.
    if (r < 1e-3 * std::max(1.0, b.norm())) {
      for (int restart = 0; restart < 40 && r > target; ++restart) {
        const double before = r;
        r = nelder_mead(x, f, std::max(1e-6, 10.0 * r), 2000, target);
        if (r > 0.9 * before) break;
      }
    }
    if (r < best) {
      best = r;
      best_u = unitaries_at(base, x);
    }
  }
  return {best_u, best};
}

ComplexVector random_state_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexVector v(Eigen::Index{1} << n);
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double re = g(rng);
    v(k) = Complex(re, g(rng));
  }
  return v / v.norm();
}

MultiQubitState random_state(int n, int rank, std::uint64_t seed) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (rank < 1 || rank > dim) {
    throw Error(ErrorCode::kRankOutOfRange,
                "rank " + std::to_string(rank) + " outside [1, " + std::to_string(dim) + "]");
  }
  if (rank == 1) {
    const ComplexVector v = random_state_vector(n, seed);
    return MultiQubitState::from_matrix(v * v.adjoint());
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(static_cast<std::size_t>(rank));
  for (auto& x : w) x = e(rng);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < rank; ++k) {
    ComplexVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = g(rng);
      v(i) = Complex(re, g(rng));
    }
    v /= v.norm();
    m += (w[static_cast<std::size_t>(k)] / total) * (v * v.adjoint());
  }
  m = 0.5 * (m + m.adjoint()).eval();
  return MultiQubitState::from_matrix(m);
}

std::vector<Mat2> random_local_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Mat2> u;
  for (int q = 0; q < n; ++q) u.push_back(haar_su2(rng));
  return u;
}

}  // namespace lueq
