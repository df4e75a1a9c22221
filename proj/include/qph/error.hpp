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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qph {

enum class ErrorCode {
  NotPowerOfTwo,
  NormOutOfTolerance,
  SizeOverflow,
  DimMismatch,
  BadLayout,
  RegisterMismatch,
  BudgetExceeded,
  NotSupported,
  EvenT,
  NonInvertibleNode,
  MalformedHeader,
  LengthMismatch,
  GroundMismatch,
  InvalidArgument,
  ConfigInvalid,
  IoFailure,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (and the CLI exit-status mapping) can branch on the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qph
