// include/advpost/dsp/resample.hpp

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

#ifndef ADVPOST_DSP_RESAMPLE_HPP_
#define ADVPOST_DSP_RESAMPLE_HPP_

#include <vector>

#include "advpost/dsp/waveform.hpp"

namespace advpost {

/// Band-limited sample-rate conversion with a Kaiser-windowed sinc kernel.
/// Output length is round(T * target_rate / sample_rate). The passband edge
/// sits at 90% of min(rates)/2; the stopband starts at min(rates)/2.
Waveform Resample(const Waveform& w, int target_rate);

/// Linear-phase low-pass FIR taps (odd length, unit DC gain).
/// `cutoff` is in cycles per sample, (0, 0.5).
std::vector<double> DesignLowPass(double cutoff, int half_width,
                                  double kaiser_beta = 8.6);

/// Zero-phase FIR filtering: convolves with `taps` (odd length) and removes
/// the group delay so the output is aligned with the input.
std::vector<float> FilterZeroPhase(const std::vector<float>& x,
                                   const std::vector<double>& taps);

}  // namespace advpost

#endif  // ADVPOST_DSP_RESAMPLE_HPP_
