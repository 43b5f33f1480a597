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

#include <span>

#include "json.hpp"

#include "lueq/protocol.hpp"

namespace lueq {

nlohmann::json complex_to_json(Complex z);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

/// Machine-readable decision report: verdict, unitaries, residual, witness or
/// reason, and the pipeline trace.
nlohmann::json decision_to_json(const Decision& decision);

std::string verdict_name(const Verdict& v);
std::string describe_witness(const Witness& w);

}  // namespace lueq
