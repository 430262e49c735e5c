// src/dsp/waveform.cpp

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

#include "advpost/dsp/waveform.hpp"

#include <algorithm>
#include <cmath>

#include "advpost/error.hpp"

namespace advpost {

void ClipInPlace(Waveform& w) {
  for (float& s : w.samples) s = std::clamp(s, -1.0f, 1.0f);
}

float PeakAbs(const Waveform& w) {
  float peak = 0.0f;
  for (float s : w.samples) peak = std::max(peak, std::fabs(s));
  return peak;
}

double MeanPower(const Waveform& w) {
  if (w.empty()) return 0.0;
  double acc = 0.0;
  for (float s : w.samples) acc += static_cast<double>(s) * s;
  return acc / static_cast<double>(w.size());
}

torch::Tensor ToTensor(const Waveform& w, torch::Dtype dtype) {
  auto t = torch::from_blob(const_cast<float*>(w.samples.data()),
                            {static_cast<int64_t>(w.samples.size())},
                            torch::kFloat32);
  return t.to(dtype, /*non_blocking=*/false, /*copy=*/true);
}

Waveform FromTensor(const torch::Tensor& samples, int sample_rate) {
  if (samples.dim() != 1) {
    Fail(ErrorCode::kDimensionMismatch, "FromTensor expects a 1-D tensor");
  }
  auto t = samples.detach().to(torch::kCPU, torch::kFloat32).contiguous();
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(t.data_ptr<float>(), t.data_ptr<float>() + t.numel());
  return w;
}

}  // namespace advpost
