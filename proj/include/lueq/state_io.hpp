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

#include <string>
#include <vector>

#include "lueq/state.hpp"
#include "lueq/tolerances.hpp"

namespace lueq {

/// State file: {"n": int, "kind": "pure" | "density", and either "amplitudes"
/// (2^n [re, im] pairs) or "matrix" (2^n rows of 2^n [re, im] pairs)}.
/// Numbers are written with 17 significant digits so a re-parse is exact.
MultiQubitState parse_state(const std::string& text, const Tolerances& tol = {});
MultiQubitState read_state_file(const std::string& path, const Tolerances& tol = {});

std::string format_density(const MultiQubitState& state);
std::string format_pure(const ComplexVector& amplitudes);

/// "%.17g" rendering used by every writer.
std::string format_double(double x);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace lueq
