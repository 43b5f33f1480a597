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
#include "lueq/report.hpp"

#include <sstream>

namespace lueq {

using nlohmann::json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

std::string verdict_name(const Verdict& v) {
  switch (v.index()) {
    case 0: return "Equivalent";
    case 1: return "NotEquivalent";
    default: return "Undecided";
  }
}

std::string describe_witness(const Witness& w) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* s = std::get_if<SpectrumMismatch>(&w)) {
    os << "SpectrumMismatch qubit " << s->qubit + 1 << ": (" << s->d.lambda1 << ", " << s->d.lambda2
       << ") vs (" << s->d_prime.lambda1 << ", " << s->d_prime.lambda2 << ")";
  } else if (const auto* f = std::get_if<VerificationFailure>(&w)) {
    os << "VerificationFailure residual " << f->residual;
  } else {
    os << "SolverEvidence " << std::get<SolverEvidence>(w).description;
  }
  return os.str();
}

namespace {

json witness_to_json(const Witness& w) {
  json j;
  if (const auto* s = std::get_if<SpectrumMismatch>(&w)) {
    j["kind"] = "SpectrumMismatch";
    j["qubit"] = s->qubit + 1;
    j["spectrum"] = {s->d.lambda1, s->d.lambda2};
    j["spectrum_prime"] = {s->d_prime.lambda1, s->d_prime.lambda2};
  } else if (const auto* f = std::get_if<VerificationFailure>(&w)) {
    j["kind"] = "VerificationFailure";
    j["residual"] = f->residual;
  } else {
    j["kind"] = "SolverEvidence";
    j["description"] = std::get<SolverEvidence>(w).description;
  }
  return j;
}

json trace_to_json(const PipelineTrace& t) {
  json qubits = json::array();
  for (std::size_t k = 0; k < t.qubits.size(); ++k) {
    const QubitRecord& r = t.qubits[k];
    json q;
    q["qubit"] = k + 1;
    q["reduced"] = matrix_to_json(r.reduced);
    q["reduced_prime"] = matrix_to_json(r.reduced_prime);
    q["spectrum"] = {r.diag.lambda1, r.diag.lambda2};
    q["spectrum_prime"] = {r.diag_prime.lambda1, r.diag_prime.lambda2};
    q["diagonalizer"] = matrix_to_json(r.diag.v);
    q["diagonalizer_prime"] = matrix_to_json(r.diag_prime.v);
    q["symmetry"] = r.symmetry == SymmetryClass::kStrong ? "strong" : "weak";
    if (r.residual) q["residual_unitary"] = matrix_to_json(r.residual->matrix());
    if (r.partner) q["partner"] = *r.partner + 1;
    if (!r.method.empty()) q["method"] = r.method;
    qubits.push_back(q);
  }
  json j;
  j["qubits"] = qubits;
  if (t.reference) j["reference"] = matrix_to_json(*t.reference);
  if (t.reference_prime) j["reference_prime"] = matrix_to_json(*t.reference_prime);
  j["log"] = t.log;
  return j;
}

}  // namespace

json decision_to_json(const Decision& d) {
  json j;
  j["verdict"] = verdict_name(d.verdict);
  if (const auto* e = std::get_if<Equivalent>(&d.verdict)) {
    json us = json::array();
    for (const auto& u : e->unitaries) us.push_back(matrix_to_json(u));
    j["unitaries"] = us;
    j["residual"] = e->residual;
  } else if (const auto* ne = std::get_if<NotEquivalent>(&d.verdict)) {
    j["witness"] = witness_to_json(ne->witness);
    if (const auto* f = std::get_if<VerificationFailure>(&ne->witness)) j["residual"] = f->residual;
  } else {
    const auto& u = std::get<Undecided>(d.verdict);
    j["reason"] = u.reason == UndecidedReason::kOrderLimitExceeded ? "OrderLimitExceeded"
                                                                   : "OracleDisabled";
  }
  j["trace"] = trace_to_json(d.trace);
  return j;
}

}  // namespace lueq
