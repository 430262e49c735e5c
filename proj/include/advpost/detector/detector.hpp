// include/advpost/detector/detector.hpp

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

#ifndef ADVPOST_DETECTOR_DETECTOR_HPP_
#define ADVPOST_DETECTOR_DETECTOR_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "advpost/dsp/lfcc.hpp"
#include "advpost/dsp/waveform.hpp"

namespace advpost {

/// Residual CNN over the (feature x frame) plane, ResNet basic blocks.
/// Stage i has base_channels * 2^i channels and stride 2 for i > 0.
struct DetectorArch {
  int base_channels = 16;
  std::vector<int> blocks_per_stage = {2, 2, 2, 2};
  /// Zero the classification head so every input scores exactly 0.5.
  bool zero_init_head = false;

  /// ResNet-34 depth and width.
  static DetectorArch FullDepth();
  void Validate() const;
  bool operator==(const DetectorArch&) const = default;
};

nlohmann::json ToJson(const DetectorArch& arch);
DetectorArch DetectorArchFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const LfccConfig& cfg);
LfccConfig LfccConfigFromJson(const nlohmann::json& j);

class BasicBlockImpl : public torch::nn::Module {
 public:
  BasicBlockImpl(int in_channels, int out_channels, int stride);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  torch::nn::Conv2d conv1_{nullptr}, conv2_{nullptr}, proj_{nullptr};
  torch::nn::BatchNorm2d bn1_{nullptr}, bn2_{nullptr}, proj_bn_{nullptr};
};
TORCH_MODULE(BasicBlock);

/// Maps LFCC batches [B, frames, dim] to logits [B]. Time is summarised by
/// mean and standard deviation pooling before a linear head.
class DetectorNetImpl : public torch::nn::Module {
 public:
  DetectorNetImpl(const DetectorArch& arch, int feature_dim);
  torch::Tensor forward(const torch::Tensor& feats);

  int feature_dim() const { return feature_dim_; }

 private:
  int feature_dim_;
  torch::nn::Sequential stem_{nullptr};
  torch::nn::Sequential stages_{nullptr};
  torch::nn::Linear head_{nullptr};
};
TORCH_MODULE(DetectorNet);

/// The target-speaker detector: probability that an utterance is natural
/// speech of a target speaker. Scoring methods are const and leave the
/// network's mode alone; Load() and TrainDetector() return it in eval
/// mode, where concurrent scoring over one model is safe.
class DetectorModel {
 public:
  DetectorModel(const DetectorArch& arch, const LfccConfig& lfcc);

  const DetectorArch& arch() const { return arch_; }
  const LfccConfig& lfcc() const { return lfcc_; }
  DetectorNet& net() { return net_; }
  const DetectorNet& net() const { return net_; }

  /// Differentiable logits for [B, frames, dim] (or [frames, dim]).
  torch::Tensor Logits(const torch::Tensor& feats) const;
  /// sigmoid(Logits(feats)).
  torch::Tensor Probability(const torch::Tensor& feats) const;

  /// Scalar probability in (0, 1). kDimensionMismatch if feats.dim()
  /// differs from the model's LFCC dimension.
  double Score(const FeatureMatrix& feats) const;
  double ScoreWaveform(const Waveform& w) const;

  void Save(const std::filesystem::path& path) const;
  static DetectorModel Load(const std::filesystem::path& path);

  /// Deep copy with independent parameters.
  DetectorModel Clone() const;

 private:
  DetectorArch arch_;
  LfccConfig lfcc_;
  DetectorNet net_;
};

}  // namespace advpost

#endif  // ADVPOST_DETECTOR_DETECTOR_HPP_
