// src/error.cpp

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

#include "advpost/error.hpp"

namespace advpost {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kUnreadableFile: return "unreadable_file";
    case ErrorCode::kMultichannel: return "multichannel";
    case ErrorCode::kUnsupportedEncoding: return "unsupported_encoding";
    case ErrorCode::kUnwritablePath: return "unwritable_path";
    case ErrorCode::kTooShort: return "too_short";
    case ErrorCode::kZeroPowerInterferer: return "zero_power_interferer";
    case ErrorCode::kEmptyRir: return "empty_rir";
    case ErrorCode::kEmptyMenu: return "empty_menu";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kLengthMismatch: return "length_mismatch";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kCodecUnavailable: return "codec_unavailable";
    case ErrorCode::kInvalidConfig: return "invalid_config";
    case ErrorCode::kConfigParse: return "config_parse";
    case ErrorCode::kMissingArtifact: return "missing_artifact";
    case ErrorCode::kBadCheckpoint: return "bad_checkpoint";
    case ErrorCode::kScoringFailure: return "scoring_failure";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace advpost
