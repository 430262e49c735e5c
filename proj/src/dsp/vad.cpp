// src/dsp/vad.cpp

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

#include "advpost/dsp/vad.hpp"

#include <algorithm>
#include <cmath>

#include "advpost/error.hpp"

namespace advpost {

std::vector<bool> VoicedMask(const Waveform& w, const VadConfig& cfg) {
  if (!(cfg.frame_ms > 0) || !(cfg.threshold_db >= 0)) {
    Fail(ErrorCode::kInvalidArgument, "VAD frame_ms must be > 0 and threshold_db >= 0");
  }
  const std::size_t n = w.size();
  const auto frame = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(cfg.frame_ms * 1e-3 * w.sample_rate)));
  std::vector<double> energy;
  for (std::size_t start = 0; start < n; start += frame) {
    const std::size_t end = std::min(n, start + frame);
    double e = 0.0;
    for (std::size_t i = start; i < end; ++i) e += double(w.samples[i]) * w.samples[i];
    energy.push_back(e / static_cast<double>(end - start));
  }
  std::vector<bool> mask(n, false);
  const double peak = energy.empty() ? 0.0 : *std::max_element(energy.begin(), energy.end());
  if (peak <= 0.0) return mask;
  const double floor = peak * std::pow(10.0, -cfg.threshold_db / 10.0);
  for (std::size_t f = 0; f < energy.size(); ++f) {
    if (energy[f] < floor) continue;
    const std::size_t end = std::min(n, (f + 1) * frame);
    for (std::size_t i = f * frame; i < end; ++i) mask[i] = true;
  }
  return mask;
}

}  // namespace advpost
