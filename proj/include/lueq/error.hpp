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

#include <stdexcept>
#include <string>
#include <string_view>

namespace lueq {

enum class ErrorCode {
  // Input states that violate a density-matrix invariant.
  kNonHermitianInput,
  kNotUnitTrace,
  kNotAState,
  kNotNormalized,
  // Shape and index errors.
  kWrongArity,
  kArityMismatch,
  kIndexOutOfRange,
  kEmptyKeepSet,
  kNonUnitaryInput,
  kParamOutOfRange,
  kDegenerateState,
  // Angle solver outcomes.
  kVanishingDenominator,
  kInconsistentCoefficients,
  kNoConsistentSolution,
  kAllCoefficientsVanish,
  kVanishingSlice,
  kNormMismatch,
  kNoSolutionFound,
  kOrderLimitExceeded,
  // Oracle and generators.
  kTooManyQubits,
  kRankOutOfRange,
  // File format.
  kParse,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // True for the codes raised when a matrix fails state validation.
  bool is_invalid_state() const noexcept {
    return code_ == ErrorCode::kNonHermitianInput || code_ == ErrorCode::kNotUnitTrace ||
           code_ == ErrorCode::kNotAState || code_ == ErrorCode::kNotNormalized;
  }

 private:
  ErrorCode code_;
};

}  // namespace lueq
