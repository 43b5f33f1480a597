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
#include "lueq/pauli.hpp"

#include <bit>
#include <cmath>

#include "lueq/error.hpp"

namespace lueq {

PauliIndex::PauliIndex(std::vector<std::uint8_t> alphas) : alphas_(std::move(alphas)) {
  for (auto a : alphas_) {
    if (a > 3) throw Error(ErrorCode::kIndexOutOfRange, "Pauli axis must be in {0,1,2,3}");
  }
}

PauliIndex PauliIndex::from_offset(std::size_t offset, int n) {
  std::vector<std::uint8_t> alphas(static_cast<std::size_t>(n));
  for (int q = n - 1; q >= 0; --q) {
    alphas[static_cast<std::size_t>(q)] = static_cast<std::uint8_t>(offset & 3u);
    offset >>= 2;
  }
  if (offset != 0) throw Error(ErrorCode::kIndexOutOfRange, "offset exceeds 4^n");
  return PauliIndex(std::move(alphas));
}

std::size_t PauliIndex::offset() const noexcept {
  std::size_t off = 0;
  for (auto a : alphas_) off = (off << 2) | a;
  return off;
}

std::string PauliIndex::to_string() const {
  std::string s;
  s.reserve(alphas_.size());
  for (auto a : alphas_) s.push_back(static_cast<char>('0' + a));
  return s;
}

PauliCoefficients::PauliCoefficients(int n, std::vector<double> r) : n_(n), r_(std::move(r)) {
  if (n < 1 || r_.size() != (std::size_t{1} << (2 * n))) {
    throw Error(ErrorCode::kWrongArity, "coefficient vector must have length 4^n");
  }
}

namespace {

// sigma_alpha has one nonzero per row: column row ^ flip, value
// (-i)^{#Y} (-1)^{popcount(row & sign)}, where flip marks X/Y factors and sign
// marks Y/Z factors. Qubit q sits at bit n-1-q of the basis index.
struct PauliMasks {
  std::uint64_t flip = 0;
  std::uint64_t sign = 0;
  Complex phase{1.0, 0.0};
};

PauliMasks masks_of(const PauliIndex& idx) {
  PauliMasks m;
  const int n = idx.num_qubits();
  int num_y = 0;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    switch (idx[q]) {
      case 1: m.flip |= bit; break;
      case 2: m.flip |= bit; m.sign |= bit; ++num_y; break;
      case 3: m.sign |= bit; break;
      default: break;
    }
  }
  static const Complex kMinusIPowers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  m.phase = kMinusIPowers[num_y % 4];
  return m;
}

inline double parity_sign(std::uint64_t x) { return (std::popcount(x) & 1) ? -1.0 : 1.0; }

}  // namespace

Mat2 single_pauli(int axis) {
  Mat2 s;
  switch (axis) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw Error(ErrorCode::kIndexOutOfRange, "Pauli axis must be in {0,1,2,3}");
  }
  return s;
}

ComplexMatrix pauli_matrix(const PauliIndex& idx) {
  const int n = idx.num_qubits();
  if (n < 1) throw Error(ErrorCode::kWrongArity, "Pauli index must cover at least one qubit");
  const auto m = masks_of(idx);
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::uint64_t row = 0; row < static_cast<std::uint64_t>(dim); ++row) {
    out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(row ^ m.flip)) =
        m.phase * parity_sign(row & m.sign);
  }
  return out;
}

Complex pauli_trace(const ComplexMatrix& mat, int n, const PauliIndex& idx) {
  const auto m = masks_of(idx);
  const std::uint64_t dim = std::uint64_t{1} << n;
  Complex acc{0.0, 0.0};
  for (std::uint64_t row = 0; row < dim; ++row) {
    const auto col = row ^ m.flip;
    acc += parity_sign(row & m.sign) *
           mat(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(row));
  }
  return m.phase * acc;
}

PauliCoefficients to_pauli_coefficients(const MultiQubitState& state, const Tolerances& tol) {
  const int n = state.num_qubits();
  const std::size_t count = std::size_t{1} << (2 * n);
  const double scale = 1.0 / static_cast<double>(std::uint64_t{1} << n);
  std::vector<double> r(count);
  for (std::size_t off = 0; off < count; ++off) {
    const auto idx = PauliIndex::from_offset(off, n);
    const Complex v = pauli_trace(state.matrix(), n, idx) * scale;
    if (std::abs(v.imag()) > tol.herm) {
      throw Error(ErrorCode::kNonHermitianInput,
                  "coefficient " + idx.to_string() + " has imaginary part " +
                      std::to_string(v.imag()));
    }
    r[off] = v.real();
  }
  return PauliCoefficients(n, std::move(r));
}

ComplexMatrix matrix_from_coefficients(int n, const std::vector<double>& r) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (std::size_t off = 0; off < r.size(); ++off) {
    const double v = r[off];
    if (v == 0.0) continue;
    const auto masks = masks_of(PauliIndex::from_offset(off, n));
    for (std::uint64_t row = 0; row < static_cast<std::uint64_t>(dim); ++row) {
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(row ^ masks.flip)) +=
          v * masks.phase * parity_sign(row & masks.sign);
    }
  }
  return m;
}

MultiQubitState from_pauli_coefficients(const PauliCoefficients& coeffs, const Tolerances& tol) {
  return MultiQubitState::from_matrix(matrix_from_coefficients(coeffs.num_qubits(), coeffs.values()),
                                      tol);
}

Vec3 bloch_vector(const MultiQubitState& state) {
  if (state.num_qubits() != 1) {
    throw Error(ErrorCode::kWrongArity, "Bloch vector needs a 1-qubit state");
  }
  const auto& m = state.matrix();
  // Tr(sigma_1 rho) = 2 Re rho_01, Tr(sigma_2 rho) = -2 Im rho_01, Tr(sigma_3 rho) = rho_00 - rho_11.
  return Vec3(2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real());
}

double correlation_coefficient(const PauliCoefficients& coeffs,
                               const std::map<int, int>& placements) {
  const int n = coeffs.num_qubits();
  std::vector<std::uint8_t> alphas(static_cast<std::size_t>(n), 0);
  for (const auto& [qubit, axis] : placements) {
    if (qubit < 0 || qubit >= n) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "qubit " + std::to_string(qubit) + " outside 0.." + std::to_string(n - 1));
    }
    if (axis < 1 || axis > 3) {
      throw Error(ErrorCode::kIndexOutOfRange, "correlation axis must be in {1,2,3}");
    }
    alphas[static_cast<std::size_t>(qubit)] = static_cast<std::uint8_t>(axis);
  }
  return coeffs[PauliIndex(std::move(alphas))];
}

}  // namespace lueq
