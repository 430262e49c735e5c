// include/advpost/rgn/generator.hpp

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

#ifndef ADVPOST_RGN_GENERATOR_HPP_
#define ADVPOST_RGN_GENERATOR_HPP_

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "advpost/dsp/waveform.hpp"

namespace advpost {

/// Shape of the residual generation network. The waveform is cut into
/// non-overlapping frames of frame_width() samples which act as input
/// channels; transposed convolutions then upsample by each factor in turn
/// until one output channel runs at the sample rate again.
struct GeneratorArch {
  std::vector<int> upsample_factors = {8, 8, 2, 2};
  int base_channels = 256;
  std::vector<int> dilations = {1, 3, 9};
  int kernel_size = 7;
  double leaky_slope = 0.2;
  /// Residuals are output_scale * tanh(.).
  double output_scale = 0.1;
  bool weight_norm = true;
  bool use_bias = true;

  int frame_width() const;
  void Validate() const;
  bool operator==(const GeneratorArch&) const = default;
};

nlohmann::json ToJson(const GeneratorArch& arch);
GeneratorArch GeneratorArchFromJson(const nlohmann::json& j);

/// 1-D convolution (or transposed convolution) with an optional weight-norm
/// reparameterisation w = g * v / ||v||. Plain convolutions pad by edge
/// replication so any input length >= 1 is accepted.
class WnConv1dImpl : public torch::nn::Module {
 public:
  struct Options {
    int in_channels;
    int out_channels;
    int kernel_size;
    int dilation = 1;
    int stride = 1;
    bool transposed = false;
    bool weight_norm = true;
    bool bias = true;
  };

  explicit WnConv1dImpl(const Options& opts);
  torch::Tensor forward(const torch::Tensor& x);
  torch::Tensor weight() const;
  /// Zeroes the effective weight and bias.
  void ZeroOutput();
  /// Multiplies the effective weight and bias by `gain`.
  void Scale(double gain);

 private:
  Options opts_;
  torch::Tensor v_, g_, bias_;
};
TORCH_MODULE(WnConv1d);

class ResidualStackImpl : public torch::nn::Module {
 public:
  ResidualStackImpl(int channels, const GeneratorArch& arch);
  torch::Tensor forward(torch::Tensor x);

 private:
  double slope_;
  std::vector<WnConv1d> dilated_, pointwise_, shortcut_;
};
TORCH_MODULE(ResidualStack);

class ResidualGeneratorImpl : public torch::nn::Module {
 public:
  explicit ResidualGeneratorImpl(const GeneratorArch& arch);

  /// samples [B, T] -> residual [B, T]; [T] -> [T]. Zero-pads to a
  /// multiple of frame_width() internally and trims the result.
  torch::Tensor forward(const torch::Tensor& samples);
  /// Output before tanh and trimming, [B, 1, padded T].
  torch::Tensor PreActivation(const torch::Tensor& samples);

  const GeneratorArch& arch() const { return arch_; }
  /// Zeroes the output layer so every residual is exactly 0.
  void ZeroOutputLayer();

  /// Rescales the output layer so that, on `samples` [B, T], the pre-tanh
  /// output RMS is `ratio` * RMS(samples) / output_scale; the residual then
  /// starts near `ratio` times the signal level. Returns the applied gain.
  double CalibrateOutput(const torch::Tensor& samples, double ratio);

 private:
  GeneratorArch arch_;
  WnConv1d input_{nullptr};
  std::vector<WnConv1d> upsample_;
  std::vector<ResidualStack> stacks_;
  WnConv1d output_{nullptr};
};
TORCH_MODULE(ResidualGenerator);

/// P(s) for a single waveform, same length and rate. Throws kNonFinite on
/// non-finite input.
Waveform GenerateResidual(ResidualGenerator& g, const Waveform& w);

/// clip(w + P(w), -1, 1).
Waveform ApplyGenerator(ResidualGenerator& g, const Waveform& w);

void SaveGenerator(const ResidualGenerator& g, const std::filesystem::path& path,
                   const nlohmann::json& extra_meta = nlohmann::json::object());
ResidualGenerator LoadGenerator(const std::filesystem::path& path);

}  // namespace advpost

#endif  // ADVPOST_RGN_GENERATOR_HPP_
