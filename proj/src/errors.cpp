// Copyright 2026 The fidsus Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fidsus/errors.hpp"

namespace fidsus {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::AsymmetryExceedsTol: return "AsymmetryExceedsTol";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NonFiniteFunctionValue: return "NonFiniteFunctionValue";
    case ErrorCode::NegativeEigenvalueBeyondTol: return "NegativeEigenvalueBeyondTol";
    case ErrorCode::NonPositiveBeta: return "NonPositiveBeta";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TauOutOfRange: return "TauOutOfRange";
    case ErrorCode::NotDensityMatrix: return "NotDensityMatrix";
    case ErrorCode::InternalFormMismatch: return "InternalFormMismatch";
    case ErrorCode::StepTooSmall: return "StepTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateGroundState: return "DegenerateGroundState";
    case ErrorCode::QuadratureDisagreement: return "QuadratureDisagreement";
    case ErrorCode::FormMismatch: return "FormMismatch";
    case ErrorCode::OracleDisagreement: return "OracleDisagreement";
    case ErrorCode::DimensionBudgetExceeded: return "DimensionBudgetExceeded";
    case ErrorCode::NoTransition: return "NoTransition";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

bool is_consistency_failure(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InternalFormMismatch:
    case ErrorCode::QuadratureDisagreement:
    case ErrorCode::FormMismatch:
    case ErrorCode::OracleDisagreement:
      return true;
    default:
      return false;
  }
}

}  // namespace fidsus
