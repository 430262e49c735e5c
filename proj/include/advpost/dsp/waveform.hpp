// include/advpost/dsp/waveform.hpp

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

#ifndef ADVPOST_DSP_WAVEFORM_HPP_
#define ADVPOST_DSP_WAVEFORM_HPP_

#include <cstddef>
#include <vector>

#include <torch/torch.h>

namespace advpost {

inline constexpr int kCanonicalSampleRate = 16000;

/// Mono PCM signal. Samples are nominally in [-1, 1]; intermediate results
/// may exceed that range until they are clipped for output.
struct Waveform {
  std::vector<float> samples;
  int sample_rate = kCanonicalSampleRate;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Clamps every sample into [-1, 1] in place.
void ClipInPlace(Waveform& w);

float PeakAbs(const Waveform& w);
double MeanPower(const Waveform& w);

/// Copies samples into a 1-D tensor of the requested dtype.
torch::Tensor ToTensor(const Waveform& w,
                       torch::Dtype dtype = torch::kFloat32);

/// Builds a waveform from a 1-D tensor (any floating dtype, any device).
Waveform FromTensor(const torch::Tensor& samples, int sample_rate);

}  // namespace advpost

#endif  // ADVPOST_DSP_WAVEFORM_HPP_
