// src/rgn/generator.cpp

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

#include "advpost/rgn/generator.hpp"

#include <cmath>

#include "advpost/error.hpp"
#include "advpost/io/checkpoint.hpp"

namespace advpost {

namespace F = torch::nn::functional;

int GeneratorArch::frame_width() const {
  int p = 1;
  for (int f : upsample_factors) p *= f;
  return p;
}

void GeneratorArch::Validate() const {
  auto bad = [](const std::string& why) {
    Fail(ErrorCode::kInvalidConfig, "rgn: " + why);
  };
  if (upsample_factors.empty()) bad("need at least one upsampling factor");
  for (int f : upsample_factors) {
    if (f < 1) bad("upsampling factors must be >= 1");
  }
  if (frame_width() != 256) {
    bad("upsampling factors must multiply to 256, got " +
        std::to_string(frame_width()));
  }
  const int halvings = static_cast<int>(upsample_factors.size());
  if (base_channels < (1 << halvings) ||
      base_channels % (1 << halvings) != 0) {
    bad("base_channels must be divisible by 2^(number of upsampling stages)");
  }
  if (dilations.empty()) bad("need at least one dilation");
  if (kernel_size < 1 || kernel_size % 2 == 0) bad("kernel_size must be odd");
  if (!(leaky_slope >= 0 && leaky_slope < 1)) bad("leaky_slope must be in [0, 1)");
  if (!(output_scale > 0)) bad("output_scale must be > 0");
}

nlohmann::json ToJson(const GeneratorArch& a) {
  return {{"family", "melgan-residual"},
          {"upsample_factors", a.upsample_factors},
          {"base_channels", a.base_channels},
          {"dilations", a.dilations},
          {"kernel_size", a.kernel_size},
          {"leaky_slope", a.leaky_slope},
          {"output_scale", a.output_scale},
          {"weight_norm", a.weight_norm},
          {"use_bias", a.use_bias}};
}

GeneratorArch GeneratorArchFromJson(const nlohmann::json& j) {
  GeneratorArch a;
  a.upsample_factors = j.at("upsample_factors").get<std::vector<int>>();
  a.base_channels = j.at("base_channels");
  a.dilations = j.at("dilations").get<std::vector<int>>();
  a.kernel_size = j.at("kernel_size");
  a.leaky_slope = j.at("leaky_slope");
  a.output_scale = j.at("output_scale");
  a.weight_norm = j.at("weight_norm");
  a.use_bias = j.at("use_bias");
  a.Validate();
  return a;
}

WnConv1dImpl::WnConv1dImpl(const Options& opts) : opts_(opts) {
  const std::vector<int64_t> shape =
      opts.transposed
          ? std::vector<int64_t>{opts.in_channels, opts.out_channels, opts.kernel_size}
          : std::vector<int64_t>{opts.out_channels, opts.in_channels, opts.kernel_size};
  // Unit-variance preserving: each output sees in * k / stride taps.
  const double fan_in = static_cast<double>(opts.in_channels) * opts.kernel_size /
                        (opts.transposed ? opts.stride : 1);
  auto v = torch::randn(shape) / std::sqrt(fan_in);
  if (opts.weight_norm) {
    v_ = register_parameter("v", v);
    g_ = register_parameter("g", v.norm(2, {1, 2}, /*keepdim=*/true).detach().clone());
  } else {
    v_ = register_parameter("weight", v);
  }
  if (opts.bias) bias_ = register_parameter("bias", torch::zeros({opts.out_channels}));
}

torch::Tensor WnConv1dImpl::weight() const {
  if (!opts_.weight_norm) return v_;
  return g_ * v_ / v_.norm(2, {1, 2}, /*keepdim=*/true);
}

void WnConv1dImpl::ZeroOutput() {
  torch::NoGradGuard no_grad;
  (opts_.weight_norm ? g_ : v_).zero_();
  if (bias_.defined()) bias_.zero_();
}

void WnConv1dImpl::Scale(double gain) {
  torch::NoGradGuard no_grad;
  (opts_.weight_norm ? g_ : v_).mul_(gain);
  if (bias_.defined()) bias_.mul_(gain);
}

torch::Tensor WnConv1dImpl::forward(const torch::Tensor& x) {
  const auto w = weight();
  const auto b = bias_.defined() ? bias_ : torch::Tensor();
  if (opts_.transposed) {
    const int r = opts_.stride;
    return torch::conv_transpose1d(x, w, b, r, /*padding=*/r / 2 + r % 2,
                                   /*output_padding=*/r % 2);
  }
  const int pad = opts_.dilation * (opts_.kernel_size - 1) / 2;
  auto padded = pad > 0 ? F::pad(x, F::PadFuncOptions({pad, pad}).mode(torch::kReplicate))
                        : x;
  const int64_t stride = 1, no_pad = 0, dilation = opts_.dilation;
  return torch::conv1d(padded, w, b, at::IntArrayRef(stride), at::IntArrayRef(no_pad),
                       at::IntArrayRef(dilation));
}

ResidualStackImpl::ResidualStackImpl(int channels, const GeneratorArch& arch)
    : slope_(arch.leaky_slope) {
  for (std::size_t i = 0; i < arch.dilations.size(); ++i) {
    const auto tag = std::to_string(i);
    dilated_.push_back(register_module(
        "dilated" + tag,
        WnConv1d(WnConv1dImpl::Options{channels, channels, 3, arch.dilations[i], 1,
                                       false, arch.weight_norm, arch.use_bias})));
    pointwise_.push_back(register_module(
        "pointwise" + tag,
        WnConv1d(WnConv1dImpl::Options{channels, channels, 1, 1, 1, false,
                                       arch.weight_norm, arch.use_bias})));
    shortcut_.push_back(register_module(
        "shortcut" + tag,
        WnConv1d(WnConv1dImpl::Options{channels, channels, 1, 1, 1, false,
                                       arch.weight_norm, arch.use_bias})));
  }
}

torch::Tensor ResidualStackImpl::forward(torch::Tensor x) {
  for (std::size_t i = 0; i < dilated_.size(); ++i) {
    auto branch = dilated_[i]->forward(F::leaky_relu(x, F::LeakyReLUFuncOptions().negative_slope(slope_)));
    branch = pointwise_[i]->forward(
        F::leaky_relu(branch, F::LeakyReLUFuncOptions().negative_slope(slope_)));
    x = shortcut_[i]->forward(x) + branch;
  }
  return x;
}

ResidualGeneratorImpl::ResidualGeneratorImpl(const GeneratorArch& arch) : arch_(arch) {
  arch_.Validate();
  int ch = arch_.base_channels;
  input_ = register_module(
      "input", WnConv1d(WnConv1dImpl::Options{arch_.frame_width(), ch,
                                              arch_.kernel_size, 1, 1, false,
                                              arch_.weight_norm, arch_.use_bias}));
  for (std::size_t i = 0; i < arch_.upsample_factors.size(); ++i) {
    const int r = arch_.upsample_factors[i];
    const auto tag = std::to_string(i);
    upsample_.push_back(register_module(
        "upsample" + tag,
        WnConv1d(WnConv1dImpl::Options{ch, ch / 2, 2 * r, 1, r, true,
                                       arch_.weight_norm, arch_.use_bias})));
    ch /= 2;
    stacks_.push_back(register_module("stack" + tag, ResidualStack(ch, arch_)));
  }
  output_ = register_module(
      "output", WnConv1d(WnConv1dImpl::Options{ch, 1, arch_.kernel_size, 1, 1,
                                               false, arch_.weight_norm,
                                               arch_.use_bias}));
}

torch::Tensor ResidualGeneratorImpl::PreActivation(const torch::Tensor& samples) {
  const auto b = samples.size(0);
  const auto t = samples.size(1);
  const int width = arch_.frame_width();
  const int64_t pad = (width - t % width) % width;
  auto x = pad > 0 ? F::pad(samples, F::PadFuncOptions({0, pad})) : samples;
  // [B, T'] -> [B, frames, width] -> [B, width, frames]
  x = x.reshape({b, -1, width}).transpose(1, 2);
  const auto act = F::LeakyReLUFuncOptions().negative_slope(arch_.leaky_slope);
  x = input_->forward(x);
  for (std::size_t i = 0; i < upsample_.size(); ++i) {
    x = upsample_[i]->forward(F::leaky_relu(x, act));
    x = stacks_[i]->forward(x);
  }
  return output_->forward(F::leaky_relu(x, act));
}

torch::Tensor ResidualGeneratorImpl::forward(const torch::Tensor& samples) {
  if (samples.dim() == 1) return forward(samples.unsqueeze(0)).squeeze(0);
  if (samples.dim() != 2) {
    Fail(ErrorCode::kDimensionMismatch, "generator expects [T] or [B, T] samples");
  }
  const auto t = samples.size(1);
  if (t == 0) return torch::zeros_like(samples);
  const auto y = PreActivation(samples).squeeze(1).narrow(1, 0, t);
  return arch_.output_scale * torch::tanh(y);
}

void ResidualGeneratorImpl::ZeroOutputLayer() { output_->ZeroOutput(); }

double ResidualGeneratorImpl::CalibrateOutput(const torch::Tensor& samples,
                                              double ratio) {
  torch::NoGradGuard no_grad;
  const auto pre = PreActivation(samples.dim() == 1 ? samples.unsqueeze(0) : samples);
  const double out_rms = pre.pow(2).mean().sqrt().item<double>();
  const double in_rms = samples.pow(2).mean().sqrt().item<double>();
  if (!(out_rms > 0) || !(in_rms > 0)) return 1.0;
  const double gain = ratio * in_rms / arch_.output_scale / out_rms;
  output_->Scale(gain);
  return gain;
}

Waveform GenerateResidual(ResidualGenerator& g, const Waveform& w) {
  for (float s : w.samples) {
    if (!std::isfinite(s)) Fail(ErrorCode::kNonFinite, "non-finite input sample");
  }
  torch::NoGradGuard no_grad;
  const auto p = g->forward(ToTensor(w).unsqueeze(0)).squeeze(0);
  return FromTensor(p, w.sample_rate);
}

Waveform ApplyGenerator(ResidualGenerator& g, const Waveform& w) {
  Waveform out = GenerateResidual(g, w);
  for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] += w.samples[i];
  ClipInPlace(out);
  return out;
}

void SaveGenerator(const ResidualGenerator& g, const std::filesystem::path& path,
                   const nlohmann::json& extra_meta) {
  Checkpoint ckpt;
  ckpt.kind = "generator";
  ckpt.meta = extra_meta;
  ckpt.meta["arch"] = ToJson(g->arch());
  ckpt.tensors = ModuleState(*g);
  SaveCheckpoint(ckpt, path);
}

ResidualGenerator LoadGenerator(const std::filesystem::path& path) {
  const auto ckpt = LoadCheckpoint(path, "generator");
  ResidualGenerator g(GeneratorArchFromJson(ckpt.meta.at("arch")));
  LoadModuleState(*g, ckpt.tensors);
  g->eval();
  return g;
}

}  // namespace advpost
