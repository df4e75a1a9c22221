// Copyright 2026 The QPH Lab Authors
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

#include "qph/error.hpp"

namespace qph {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::NormOutOfTolerance: return "NormOutOfTolerance";
    case ErrorCode::SizeOverflow: return "SizeOverflow";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::BadLayout: return "BadLayout";
    case ErrorCode::RegisterMismatch: return "RegisterMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotSupported: return "NotSupported";
    case ErrorCode::EvenT: return "EvenT";
    case ErrorCode::NonInvertibleNode: return "NonInvertibleNode";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::GroundMismatch: return "GroundMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace qph
