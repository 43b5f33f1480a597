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
// lueq: decide local-unitary equivalence of multi-qubit states.
//
// Exit codes: 0 equivalent (or success), 1 usage or I/O error, 2 invalid
// state, 3 not equivalent, 4 undecided.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lueq/error.hpp"
#include "lueq/local_ops.hpp"
#include "lueq/oracle.hpp"
#include "lueq/protocol.hpp"
#include "lueq/reduction.hpp"
#include "lueq/reference_form.hpp"
#include "lueq/report.hpp"
#include "lueq/spectral.hpp"
#include "lueq/state_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalidState = 2;
constexpr int kExitNotEquivalent = 3;
constexpr int kExitUndecided = 4;

std::string matrix_text(const lueq::Mat2& u) {
  std::string out;
  for (int r = 0; r < 2; ++r) {
    out += "  [";
    for (int c = 0; c < 2; ++c) {
      if (c) out += ", ";
      out += lueq::format_double(u(r, c).real()) + (u(r, c).imag() < 0 ? " - " : " + ") +
             lueq::format_double(std::abs(u(r, c).imag())) + "i";
    }
    out += "]\n";
  }
  return out;
}

struct DecideOptions {
  std::string file_a;
  std::string file_b;
  double tol_verify = 0.0;
  double tol_coef = 0.0;
  std::string oracle = "auto";
  std::uint64_t seed = 0;
  bool json = false;
  bool trace = false;
};

int run_decide(const DecideOptions& opt, bool tol_verify_set, bool tol_coef_set) {
  lueq::DecideConfig config;
  if (const char* env = std::getenv("LUEQ_TOL_VERIFY"); env && !tol_verify_set) {
    try {
      config.tol.verify = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "error: LUEQ_TOL_VERIFY is not a number\n";
      return kExitUsage;
    }
  }
  if (tol_verify_set) config.tol.verify = opt.tol_verify;
  if (tol_coef_set) config.tol.coef = opt.tol_coef;
  config.oracle = opt.oracle == "on"    ? lueq::OracleMode::kOn
                  : opt.oracle == "off" ? lueq::OracleMode::kOff
                                        : lueq::OracleMode::kAuto;
  config.seed = opt.seed;

  const auto rho = lueq::read_state_file(opt.file_a, config.tol);
  const auto rho_prime = lueq::read_state_file(opt.file_b, config.tol);
  const lueq::Decision d = lueq::decide_lu_equivalence(rho, rho_prime, config);

  if (opt.json) {
    std::cout << lueq::decision_to_json(d).dump(2) << "\n";
  } else {
    std::cout << lueq::verdict_name(d.verdict) << "\n";
    if (const auto* e = std::get_if<lueq::Equivalent>(&d.verdict)) {
      std::cout << "residual " << lueq::format_double(e->residual) << "\n";
      for (std::size_t k = 0; k < e->unitaries.size(); ++k) {
        std::cout << "U" << k + 1 << " =\n" << matrix_text(e->unitaries[k]);
      }
    } else if (const auto* ne = std::get_if<lueq::NotEquivalent>(&d.verdict)) {
      std::cout << lueq::describe_witness(ne->witness) << "\n";
    } else {
      const auto& u = std::get<lueq::Undecided>(d.verdict);
      std::cout << (u.reason == lueq::UndecidedReason::kOrderLimitExceeded ? "OrderLimitExceeded"
                                                                           : "OracleDisabled")
                << "\n";
    }
    if (opt.trace) {
      for (const auto& line : d.trace.log) std::cout << "  " << line << "\n";
    }
  }
  switch (d.verdict.index()) {
    case 0: return kExitOk;
    case 1: return kExitNotEquivalent;
    default: return kExitUndecided;
  }
}

int run_reduce(const std::string& file, const std::vector<int>& keep_one_based) {
  const auto rho = lueq::read_state_file(file);
  std::vector<int> keep;
  for (int k : keep_one_based) {
    if (k < 1 || k > rho.num_qubits()) {
      throw lueq::Error(lueq::ErrorCode::kIndexOutOfRange,
                        "qubit " + std::to_string(k) + " outside 1.." + std::to_string(rho.num_qubits()));
    }
    keep.push_back(k - 1);
  }
  std::cout << lueq::format_density(lueq::partial_trace(rho, keep).state);
  return kExitOk;
}

int run_refform(const std::string& file) {
  const auto rho = lueq::read_state_file(file);
  std::vector<lueq::Mat2> v;
  for (int q = 0; q < rho.num_qubits(); ++q) {
    v.push_back(lueq::diagonalize_qubit(lueq::single_qubit_marginal(rho, q)).v);
  }
  // The state document followed by the diagonalizers as an extra field, so
  // the output still parses as a state file.
  std::string doc = lueq::format_density(lueq::reference_form(rho, v));
  doc.erase(doc.rfind('}'));
  while (!doc.empty() && (doc.back() == '\n' || doc.back() == ' ')) doc.pop_back();
  doc += ",\n  \"diagonalizers\": [\n";
  for (std::size_t k = 0; k < v.size(); ++k) {
    doc += "    [";
    for (int r = 0; r < 2; ++r) {
      doc += r ? ", [" : "[";
      for (int c = 0; c < 2; ++c) {
        doc += (c ? ", [" : "[") + lueq::format_double(v[k](r, c).real()) + ", " +
               lueq::format_double(v[k](r, c).imag()) + "]";
      }
      doc += "]";
    }
    doc += k + 1 < v.size() ? "],\n" : "]\n";
  }
  std::cout << doc << "  ]\n}\n";
  return kExitOk;
}

std::string unitaries_document(const std::vector<lueq::Mat2>& u) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& m : u) j.push_back(lueq::matrix_to_json(m));
  return nlohmann::json{{"unitaries", j}}.dump(2) + "\n";
}

int run_gen(int n, int rank, std::uint64_t seed, const std::optional<std::uint64_t>& apply_lu,
            const std::string& out) {
  if (n < 1 || n > 12) throw lueq::Error(lueq::ErrorCode::kIndexOutOfRange, "--n must be in [1, 12]");
  const lueq::MultiQubitState rho = lueq::random_state(n, rank, seed);
  const bool pure = rank == 1;
  const lueq::ComplexVector psi = pure ? lueq::random_state_vector(n, seed) : lueq::ComplexVector();
  const std::string doc = pure ? lueq::format_pure(psi) : lueq::format_density(rho);
  if (!apply_lu) {
    if (out.empty()) {
      std::cout << doc;
    } else {
      lueq::write_text_file(out + "_a.json", doc);
    }
    return kExitOk;
  }
  const std::string prefix = out.empty() ? "lueq_gen" : out;
  const auto u = lueq::random_local_unitary(n, *apply_lu);
  const std::string partner =
      pure ? lueq::format_pure(lueq::kron_all(u) * psi)
           : lueq::format_density(lueq::apply_local_unitary(rho, u));
  lueq::write_text_file(prefix + "_a.json", doc);
  lueq::write_text_file(prefix + "_b.json", partner);
  lueq::write_text_file(prefix + "_unitaries.json", unitaries_document(u));
  std::cout << prefix << "_a.json\n" << prefix << "_b.json\n" << prefix << "_unitaries.json\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local-unitary equivalence of multi-qubit states"};
  app.require_subcommand(1);

  DecideOptions dopt;
  auto* decide = app.add_subcommand("decide", "Decide whether two states are LU-equivalent");
  decide->add_option("state_a", dopt.file_a, "First state file")->required();
  decide->add_option("state_b", dopt.file_b, "Second state file")->required();
  auto* tv = decide->add_option("--tol-verify", dopt.tol_verify, "Relative verification tolerance");
  auto* tc = decide->add_option("--tol-coef", dopt.tol_coef, "Coefficient zero threshold");
  decide->add_option("--oracle", dopt.oracle, "Brute-force fallback (auto: n <= 3)")
      ->check(CLI::IsMember({"on", "off", "auto"}));
  decide->add_option("--seed", dopt.seed, "Seed for randomized search");
  decide->add_flag("--json", dopt.json, "Machine-readable report");
  decide->add_flag("--trace", dopt.trace, "Print the step log");

  std::string reduce_file;
  std::vector<int> keep;
  auto* reduce = app.add_subcommand("reduce", "Partial trace onto the kept qubits");
  reduce->add_option("state", reduce_file, "State file")->required();
  reduce->add_option("--keep", keep, "Qubits to keep (1-based)")->required()->delimiter(',');

  std::string refform_file;
  auto* refform = app.add_subcommand("refform", "Reference form and diagonalizers");
  refform->add_option("state", refform_file, "State file")->required();

  int gen_n = 2, gen_rank = 1;
  std::uint64_t gen_seed = 0;
  std::optional<std::uint64_t> apply_lu;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Random state, optionally with an LU-conjugated partner");
  gen->add_option("--n", gen_n, "Number of qubits")->required();
  gen->add_option("--rank", gen_rank, "Rank of the density matrix")->required();
  gen->add_option("--seed", gen_seed, "Seed")->required();
  gen->add_option("--apply-lu", apply_lu, "Seed of the local unitaries for the partner");
  gen->add_option("--out", gen_out, "Output file prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*decide) return run_decide(dopt, tv->count() > 0, tc->count() > 0);
    if (*reduce) return run_reduce(reduce_file, keep);
    if (*refform) return run_refform(refform_file);
    if (*gen) return run_gen(gen_n, gen_rank, gen_seed, apply_lu, gen_out);
  } catch (const lueq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_invalid_state() ? kExitInvalidState : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
