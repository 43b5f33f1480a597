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
#include "lueq/state_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "lueq/error.hpp"

namespace lueq {

namespace {

using nlohmann::json;

Complex parse_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::kParse, "complex entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::string complex_text(Complex z) {
  return "[" + format_double(z.real()) + ", " + format_double(z.imag()) + "]";
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

MultiQubitState parse_state(const std::string& text, const Tolerances& tol) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_integer() ||
      !doc.contains("kind") || !doc["kind"].is_string()) {
    throw Error(ErrorCode::kParse, "state needs integer \"n\" and string \"kind\"");
  }
  const int n = doc["n"].get<int>();
  if (n < 1 || n > 12) throw Error(ErrorCode::kParse, "n must be between 1 and 12");
  const std::size_t dim = std::size_t{1} << n;
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "pure") {
    const json& amp = doc.value("amplitudes", json());
    if (!amp.is_array() || amp.size() != dim) {
      throw Error(ErrorCode::kParse, "\"amplitudes\" must hold 2^n entries");
    }
    ComplexVector v(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) v(static_cast<Eigen::Index>(k)) = parse_complex(amp[k]);
    return MultiQubitState::from_amplitudes(v, tol);
  }
  if (kind == "density") {
    const json& mat = doc.value("matrix", json());
    if (!mat.is_array() || mat.size() != dim) {
      throw Error(ErrorCode::kParse, "\"matrix\" must hold 2^n rows");
    }
    ComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
      if (!mat[r].is_array() || mat[r].size() != dim) {
        throw Error(ErrorCode::kParse, "row " + std::to_string(r) + " must hold 2^n entries");
      }
      for (std::size_t c = 0; c < dim; ++c) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(mat[r][c]);
      }
    }
    return MultiQubitState::from_matrix(std::move(m), tol);
  }
  throw Error(ErrorCode::kParse, "unknown kind \"" + kind + "\"");
}

MultiQubitState read_state_file(const std::string& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_state(ss.str(), tol);
}

std::string format_density(const MultiQubitState& state) {
  const ComplexMatrix& m = state.matrix();
  std::string out = "{\n  \"n\": " + std::to_string(state.num_qubits()) +
                    ",\n  \"kind\": \"density\",\n  \"matrix\": [\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out += "    [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ", ";
      out += complex_text(m(r, c));
    }
    out += r + 1 < m.rows() ? "],\n" : "]\n";
  }
  return out + "  ]\n}\n";
}

std::string format_pure(const ComplexVector& amplitudes) {
  const int n = qubits_for_dim(amplitudes.size());
  if (n < 1) throw Error(ErrorCode::kWrongArity, "amplitude count is not a power of two");
  std::string out = "{\n  \"n\": " + std::to_string(n) +
                    ",\n  \"kind\": \"pure\",\n  \"amplitudes\": [\n";
  for (Eigen::Index k = 0; k < amplitudes.size(); ++k) {
    out += "    " + complex_text(amplitudes(k)) + (k + 1 < amplitudes.size() ? ",\n" : "\n");
  }
  return out + "  ]\n}\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParse, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kParse, "write failed for " + path);
}

}  // namespace lueq
