// include/advpost/error.hpp

// Copyright 2026  The advpost Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ADVPOST_ERROR_HPP_
#define ADVPOST_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace advpost {

/// Every failure the toolkit reports carries one of these codes. The CLI maps
/// them onto process exit codes, so values are grouped by caller remedy.
enum class ErrorCode {
  kInvalidArgument,
  kUnreadableFile,
  kMultichannel,
  kUnsupportedEncoding,
  kUnwritablePath,
  kTooShort,
  kZeroPowerInterferer,
  kEmptyRir,
  kEmptyMenu,
  kEmptyInput,
  kLengthMismatch,
  kDimensionMismatch,
  kNonFinite,
  kCodecUnavailable,
  kInvalidConfig,
  kConfigParse,
  kMissingArtifact,
  kBadCheckpoint,
  kScoringFailure,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace advpost

#endif  // ADVPOST_ERROR_HPP_
