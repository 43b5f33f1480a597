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
#include "lueq/local_ops.hpp"

#include <cstdint>

#include "lueq/error.hpp"

namespace lueq {

namespace {

// Left-multiply rows of \p m by U acting on the qubit at bit position \p bit.
void apply_left(ComplexMatrix& m, const Mat2& u, std::uint64_t bit) {
  const auto dim = static_cast<std::uint64_t>(m.rows());
  for (std::uint64_t r0 = 0; r0 < dim; ++r0) {
    if (r0 & bit) continue;
    const auto i0 = static_cast<Eigen::Index>(r0);
    const auto i1 = static_cast<Eigen::Index>(r0 | bit);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex x0 = m(i0, c);
      const Complex x1 = m(i1, c);
      m(i0, c) = u(0, 0) * x0 + u(0, 1) * x1;
      m(i1, c) = u(1, 0) * x0 + u(1, 1) * x1;
    }
  }
}

// Right-multiply columns of \p m by U^dag on the qubit at bit position \p bit.
void apply_right_adjoint(ComplexMatrix& m, const Mat2& u, std::uint64_t bit) {
  const auto dim = static_cast<std::uint64_t>(m.cols());
  const Mat2 ud = u.adjoint();
  for (std::uint64_t c0 = 0; c0 < dim; ++c0) {
    if (c0 & bit) continue;
    const auto j0 = static_cast<Eigen::Index>(c0);
    const auto j1 = static_cast<Eigen::Index>(c0 | bit);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const Complex x0 = m(r, j0);
      const Complex x1 = m(r, j1);
      m(r, j0) = x0 * ud(0, 0) + x1 * ud(1, 0);
      m(r, j1) = x0 * ud(0, 1) + x1 * ud(1, 1);
    }
  }
}

}  // namespace

ComplexMatrix conjugate_by_locals(const ComplexMatrix& m, std::span<const Mat2> locals) {
  const int n = static_cast<int>(locals.size());
  if (m.rows() != (Eigen::Index{1} << n) || m.cols() != m.rows()) {
    throw Error(ErrorCode::kArityMismatch, "need one 2x2 factor per qubit");
  }
  ComplexMatrix out = m;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    apply_left(out, locals[static_cast<std::size_t>(q)], bit);
    apply_right_adjoint(out, locals[static_cast<std::size_t>(q)], bit);
  }
  return out;
}

ComplexMatrix kron_all(std::span<const Mat2> locals) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& u : locals) {
    ComplexMatrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      for (Eigen::Index j = 0; j < out.cols(); ++j) {
        next.block<2, 2>(2 * i, 2 * j) = out(i, j) * u;
      }
    }
    out = std::move(next);
  }
  return out;
}

double unitarity_defect(const Mat2& u) { return (u.adjoint() * u - Mat2::Identity()).norm(); }

}  // namespace lueq
