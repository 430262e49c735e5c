// include/advpost/dsp/vad.hpp

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

#ifndef ADVPOST_DSP_VAD_HPP_
#define ADVPOST_DSP_VAD_HPP_

#include <vector>

#include "advpost/dsp/waveform.hpp"

namespace advpost {

struct VadConfig {
  double frame_ms = 25.0;
  /// A frame is voiced when its energy is within this many dB of the
  /// loudest frame.
  double threshold_db = 30.0;
  bool operator==(const VadConfig&) const = default;
};

/// Per-sample voiced mask from non-overlapping frame energies. A trailing
/// partial frame is judged on its own energy. An all-zero signal yields an
/// all-false mask.
std::vector<bool> VoicedMask(const Waveform& w, const VadConfig& cfg = {});

}  // namespace advpost

#endif  // ADVPOST_DSP_VAD_HPP_
