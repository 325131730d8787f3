// Copyright 2026 The reskew Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
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

namespace reskew {

enum class ErrorCode {
  kTooShort,
  kZeroVariance,
  kLagTooLarge,
  kSingularToeplitz,
  kInvalidArgument,
  kNonFinite,
  kInvalidSpec,
  kSignalTooShort,
  kExactTie,
  kNoiseTooShort,
  kSilentInput,
  kInvalidGeometry,
  kRateMismatch,
  kIo,
  kFormat,
  kEmptyManifest,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kLagTooLarge: return "LagTooLarge";
    case ErrorCode::kSingularToeplitz: return "SingularToeplitz";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kSignalTooShort: return "SignalTooShort";
    case ErrorCode::kExactTie: return "ExactTie";
    case ErrorCode::kNoiseTooShort: return "NoiseTooShort";
    case ErrorCode::kSilentInput: return "SilentInput";
    case ErrorCode::kInvalidGeometry: return "InvalidGeometry";
    case ErrorCode::kRateMismatch: return "RateMismatch";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kFormat: return "Format";
    case ErrorCode::kEmptyManifest: return "EmptyManifest";
  }
  return "Unknown";
}

// All library failures are reported through this exception; code() names
// the failure class so callers (e.g. the batch runner) can record it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace reskew
