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
#include "lueq/error.hpp"

namespace lueq {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonHermitianInput: return "NonHermitianInput";
    case ErrorCode::kNotUnitTrace: return "NotUnitTrace";
    case ErrorCode::kNotAState: return "NotAState";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kWrongArity: return "WrongArity";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kEmptyKeepSet: return "EmptyKeepSet";
    case ErrorCode::kNonUnitaryInput: return "NonUnitaryInput";
    case ErrorCode::kParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::kDegenerateState: return "DegenerateState";
    case ErrorCode::kVanishingDenominator: return "VanishingDenominator";
    case ErrorCode::kInconsistentCoefficients: return "InconsistentCoefficients";
    case ErrorCode::kNoConsistentSolution: return "NoConsistentSolution";
    case ErrorCode::kAllCoefficientsVanish: return "AllCoefficientsVanish";
    case ErrorCode::kVanishingSlice: return "VanishingSlice";
    case ErrorCode::kNormMismatch: return "NormMismatch";
    case ErrorCode::kNoSolutionFound: return "NoSolutionFound";
    case ErrorCode::kOrderLimitExceeded: return "OrderLimitExceeded";
    case ErrorCode::kTooManyQubits: return "TooManyQubits";
    case ErrorCode::kRankOutOfRange: return "RankOutOfRange";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

}  // namespace lueq
