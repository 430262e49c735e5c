// include/advpost/dsp/lfcc.hpp

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

#ifndef ADVPOST_DSP_LFCC_HPP_
#define ADVPOST_DSP_LFCC_HPP_

#include <cstdint>

#include <torch/torch.h>

#include "advpost/dsp/waveform.hpp"

namespace advpost {

struct LfccConfig {
  int sample_rate = kCanonicalSampleRate;
  double win_ms = 25.0;
  double hop_ms = 10.0;
  int n_fft = 512;
  int n_filters = 70;
  int n_coeff = 20;
  bool include_deltas = true;
  int delta_window = 2;
  double log_floor = 1e-10;

  int WindowLength() const;
  int HopLength() const;
  /// n_coeff, tripled when deltas are appended.
  int FeatureDim() const;
  /// floor((num_samples - win) / hop) + 1, or 0 when shorter than a window.
  int64_t NumFrames(int64_t num_samples) const;
  /// Throws kInvalidConfig on an inconsistent configuration.
  void Validate() const;

  bool operator==(const LfccConfig&) const = default;
};

/// LFCC frames of a single utterance, (frames x FeatureDim()).
struct FeatureMatrix {
  torch::Tensor values;
  double frame_hop_s = 0.0;
  double frame_len_s = 0.0;

  int64_t frames() const { return values.size(0); }
  int64_t dim() const { return values.size(1); }
};

/// Linear-frequency cepstral coefficients built entirely from tensor ops,
/// so gradients flow from the coefficients back to the input samples:
///
///   frame -> Hamming window -> |rfft|^2 -> linear triangular filterbank
///         -> log(. + log_floor) -> DCT-II (orthonormal) -> truncate
///         -> optional delta and delta-delta (regression, edge-replicated)
///
/// The filterbank and DCT matrices are built once; Forward() follows the
/// dtype of its input so gradient checks can run in double precision.
class LfccExtractor {
 public:
  explicit LfccExtractor(const LfccConfig& cfg);

  /// samples: [T] or [B, T]. Returns [frames, dim] or [B, frames, dim].
  torch::Tensor Forward(const torch::Tensor& samples) const;

  const LfccConfig& config() const { return cfg_; }
  /// [n_fft/2 + 1, n_filters], double precision.
  const torch::Tensor& filterbank() const { return filterbank_; }
  /// [n_filters, n_coeff], double precision.
  const torch::Tensor& dct() const { return dct_; }

 private:
  torch::Tensor Deltas(const torch::Tensor& x) const;

  LfccConfig cfg_;
  torch::Tensor window_;
  torch::Tensor filterbank_;
  torch::Tensor dct_;
};

/// Convenience wrapper; throws kTooShort when w holds less than one window
/// and kInvalidArgument when the sample rate differs from cfg.sample_rate.
FeatureMatrix ExtractLfcc(const Waveform& w, const LfccConfig& cfg);

}  // namespace advpost

#endif  // ADVPOST_DSP_LFCC_HPP_
