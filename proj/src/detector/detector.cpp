// src/detector/detector.cpp

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

#include "advpost/detector/detector.hpp"

#include <cmath>

#include "advpost/error.hpp"
#include "advpost/io/checkpoint.hpp"

namespace advpost {

namespace nn = torch::nn;

DetectorArch DetectorArch::FullDepth() {
  DetectorArch a;
  a.base_channels = 64;
  a.blocks_per_stage = {3, 4, 6, 3};
  return a;
}

void DetectorArch::Validate() const {
  if (base_channels < 1) {
    Fail(ErrorCode::kInvalidConfig, "detector: base_channels must be >= 1");
  }
  if (blocks_per_stage.empty()) {
    Fail(ErrorCode::kInvalidConfig, "detector: need at least one stage");
  }
  for (int b : blocks_per_stage) {
    if (b < 1) {
      Fail(ErrorCode::kInvalidConfig, "detector: every stage needs >= 1 block");
    }
  }
}

nlohmann::json ToJson(const DetectorArch& a) {
  return {{"family", "resnet-basic"},
          {"base_channels", a.base_channels},
          {"blocks_per_stage", a.blocks_per_stage},
          {"zero_init_head", a.zero_init_head}};
}

DetectorArch DetectorArchFromJson(const nlohmann::json& j) {
  DetectorArch a;
  a.base_channels = j.at("base_channels");
  a.blocks_per_stage = j.at("blocks_per_stage").get<std::vector<int>>();
  a.zero_init_head = j.value("zero_init_head", false);
  a.Validate();
  return a;
}

nlohmann::json ToJson(const LfccConfig& c) {
  return {{"sample_rate", c.sample_rate},   {"win_ms", c.win_ms},
          {"hop_ms", c.hop_ms},             {"n_fft", c.n_fft},
          {"n_filters", c.n_filters},       {"n_coeff", c.n_coeff},
          {"include_deltas", c.include_deltas},
          {"delta_window", c.delta_window}, {"log_floor", c.log_floor}};
}

LfccConfig LfccConfigFromJson(const nlohmann::json& j) {
  LfccConfig c;
  c.sample_rate = j.at("sample_rate");
  c.win_ms = j.at("win_ms");
  c.hop_ms = j.at("hop_ms");
  c.n_fft = j.at("n_fft");
  c.n_filters = j.at("n_filters");
  c.n_coeff = j.at("n_coeff");
  c.include_deltas = j.at("include_deltas");
  c.delta_window = j.at("delta_window");
  c.log_floor = j.at("log_floor");
  c.Validate();
  return c;
}

BasicBlockImpl::BasicBlockImpl(int in_channels, int out_channels, int stride) {
  conv1_ = register_module(
      "conv1", nn::Conv2d(nn::Conv2dOptions(in_channels, out_channels, 3)
                              .stride(stride)
                              .padding(1)
                              .bias(false)));
  bn1_ = register_module("bn1", nn::BatchNorm2d(out_channels));
  conv2_ = register_module(
      "conv2", nn::Conv2d(nn::Conv2dOptions(out_channels, out_channels, 3)
                              .padding(1)
                              .bias(false)));
  bn2_ = register_module("bn2", nn::BatchNorm2d(out_channels));
  if (stride != 1 || in_channels != out_channels) {
    proj_ = register_module(
        "proj", nn::Conv2d(nn::Conv2dOptions(in_channels, out_channels, 1)
                               .stride(stride)
                               .bias(false)));
    proj_bn_ = register_module("proj_bn", nn::BatchNorm2d(out_channels));
  }
}

torch::Tensor BasicBlockImpl::forward(const torch::Tensor& x) {
  auto y = torch::relu(bn1_(conv1_(x)));
  y = bn2_(conv2_(y));
  auto shortcut = proj_ ? proj_bn_(proj_(x)) : x;
  return torch::relu(y + shortcut);
}

DetectorNetImpl::DetectorNetImpl(const DetectorArch& arch, int feature_dim)
    : feature_dim_(feature_dim) {
  arch.Validate();
  const int c0 = arch.base_channels;
  stem_ = register_module(
      "stem",
      nn::Sequential(nn::Conv2d(nn::Conv2dOptions(1, c0, 3).padding(1).bias(false)),
                     nn::BatchNorm2d(c0), nn::ReLU()));
  stages_ = register_module("stages", nn::Sequential());
  int in = c0;
  int height = feature_dim;
  for (std::size_t s = 0; s < arch.blocks_per_stage.size(); ++s) {
    const int out = c0 << s;
    const int stride = s == 0 ? 1 : 2;
    if (stride == 2) height = (height + 1) / 2;
    for (int b = 0; b < arch.blocks_per_stage[s]; ++b) {
      stages_->push_back(BasicBlock(in, out, b == 0 ? stride : 1));
      in = out;
    }
  }
  head_ = register_module("head", nn::Linear(2 * in * height, 1));
  if (arch.zero_init_head) {
    torch::NoGradGuard no_grad;
    head_->weight.zero_();
    head_->bias.zero_();
  }
}

torch::Tensor DetectorNetImpl::forward(const torch::Tensor& feats) {
  // [B, frames, dim] -> [B, 1, dim, frames]
  auto x = feats.transpose(1, 2).unsqueeze(1);
  x = stages_->forward(stem_->forward(x));
  const auto b = x.size(0);
  x = x.reshape({b, -1, x.size(3)});
  const auto mean = x.mean(2);
  const auto var = (x - mean.unsqueeze(2)).pow(2).mean(2);
  const auto std = torch::sqrt(var + 1e-5);
  return head_(torch::cat({mean, std}, 1)).squeeze(1);
}

DetectorModel::DetectorModel(const DetectorArch& arch, const LfccConfig& lfcc)
    : arch_(arch), lfcc_(lfcc), net_(arch, lfcc.FeatureDim()) {
  lfcc_.Validate();
}

torch::Tensor DetectorModel::Logits(const torch::Tensor& feats) const {
  if (feats.dim() != 2 && feats.dim() != 3) {
    Fail(ErrorCode::kDimensionMismatch, "detector expects [frames, dim] or [B, frames, dim]");
  }
  if (feats.size(-1) != net_->feature_dim()) {
    Fail(ErrorCode::kDimensionMismatch,
         "feature dimension " + std::to_string(feats.size(-1)) +
             " does not match detector input " +
             std::to_string(net_->feature_dim()));
  }
  auto batched = feats.dim() == 2 ? feats.unsqueeze(0) : feats;
  auto& net = const_cast<DetectorNetImpl&>(*net_);
  auto logits = net.forward(batched);
  return feats.dim() == 2 ? logits.squeeze(0) : logits;
}

torch::Tensor DetectorModel::Probability(const torch::Tensor& feats) const {
  return torch::sigmoid(Logits(feats));
}

double DetectorModel::Score(const FeatureMatrix& feats) const {
  torch::NoGradGuard no_grad;
  const auto dtype = net_->parameters().front().scalar_type();
  const auto logit = Logits(feats.values.to(dtype)).item<double>();
  return 1.0 / (1.0 + std::exp(-logit));
}

double DetectorModel::ScoreWaveform(const Waveform& w) const {
  return Score(ExtractLfcc(w, lfcc_));
}

void DetectorModel::Save(const std::filesystem::path& path) const {
  Checkpoint ckpt;
  ckpt.kind = "detector";
  ckpt.meta = {{"arch", ToJson(arch_)}, {"lfcc", ToJson(lfcc_)}};
  ckpt.tensors = ModuleState(*net_);
  SaveCheckpoint(ckpt, path);
}

DetectorModel DetectorModel::Load(const std::filesystem::path& path) {
  const auto ckpt = LoadCheckpoint(path, "detector");
  DetectorModel model(DetectorArchFromJson(ckpt.meta.at("arch")),
                      LfccConfigFromJson(ckpt.meta.at("lfcc")));
  LoadModuleState(*model.net_, ckpt.tensors);
  model.net_->eval();
  return model;
}

DetectorModel DetectorModel::Clone() const {
  DetectorModel copy(arch_, lfcc_);
  LoadModuleState(*copy.net_, ModuleState(*net_));
  copy.net_->train(net_->is_training());
  return copy;
}

}  // namespace advpost
