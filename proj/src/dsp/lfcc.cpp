// src/dsp/lfcc.cpp

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

#include "advpost/dsp/lfcc.hpp"

#include <cmath>
#include <numbers>

#include "advpost/error.hpp"

namespace advpost {

int LfccConfig::WindowLength() const {
  return static_cast<int>(std::lround(win_ms * sample_rate / 1000.0));
}

int LfccConfig::HopLength() const {
  return static_cast<int>(std::lround(hop_ms * sample_rate / 1000.0));
}

int LfccConfig::FeatureDim() const {
  return include_deltas ? 3 * n_coeff : n_coeff;
}

int64_t LfccConfig::NumFrames(int64_t num_samples) const {
  const int win = WindowLength();
  if (num_samples < win) return 0;
  return (num_samples - win) / HopLength() + 1;
}

void LfccConfig::Validate() const {
  auto bad = [](const std::string& why) {
    Fail(ErrorCode::kInvalidConfig, "lfcc: " + why);
  };
  if (sample_rate <= 0) bad("sample_rate must be positive");
  if (win_ms <= 0 || hop_ms <= 0) bad("win_ms and hop_ms must be positive");
  if (WindowLength() < 2 || HopLength() < 1) bad("window shorter than 2 samples");
  if (n_fft < WindowLength()) bad("n_fft must be >= window length");
  if (n_filters < 1) bad("n_filters must be >= 1");
  if (n_coeff < 1 || n_coeff > n_filters) bad("need 1 <= n_coeff <= n_filters");
  if (delta_window < 1) bad("delta_window must be >= 1");
  if (!(log_floor > 0)) bad("log_floor must be > 0");
}

LfccExtractor::LfccExtractor(const LfccConfig& cfg) : cfg_(cfg) {
  cfg_.Validate();
  const auto opts = torch::TensorOptions().dtype(torch::kFloat64);
  const int win = cfg_.WindowLength();

  window_ = torch::hamming_window(win, /*periodic=*/false, opts);

  const int bins = cfg_.n_fft / 2 + 1;
  const int m = cfg_.n_filters;
  const double nyquist = cfg_.sample_rate / 2.0;
  filterbank_ = torch::zeros({bins, m}, opts);
  auto fb = filterbank_.accessor<double, 2>();
  for (int j = 0; j < m; ++j) {
    const double lo = nyquist * j / (m + 1);
    const double mid = nyquist * (j + 1) / (m + 1);
    const double hi = nyquist * (j + 2) / (m + 1);
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * cfg_.sample_rate / cfg_.n_fft;
      const double w = std::min((f - lo) / (mid - lo), (hi - f) / (hi - mid));
      fb[k][j] = std::max(0.0, w);
    }
  }

  const int n = cfg_.n_coeff;
  dct_ = torch::zeros({m, n}, opts);
  auto d = dct_.accessor<double, 2>();
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) {
      const double scale = k == 0 ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m);
      d[i][k] = scale * std::cos(std::numbers::pi / m * (i + 0.5) * k);
    }
  }
}

torch::Tensor LfccExtractor::Deltas(const torch::Tensor& x) const {
  // x: [..., F, D]; regression over +-delta_window frames.
  const int n = cfg_.delta_window;
  const int64_t frames = x.size(-2);
  const auto first = x.narrow(-2, 0, 1);
  const auto last = x.narrow(-2, frames - 1, 1);
  std::vector<torch::Tensor> parts;
  for (int i = 0; i < n; ++i) parts.push_back(first);
  parts.push_back(x);
  for (int i = 0; i < n; ++i) parts.push_back(last);
  const auto padded = torch::cat(parts, -2);
  double denom = 0.0;
  for (int i = 1; i <= n; ++i) denom += 2.0 * i * i;
  auto acc = torch::zeros_like(x);
  for (int i = 1; i <= n; ++i) {
    acc = acc + static_cast<double>(i) * (padded.narrow(-2, n + i, frames) -
                                          padded.narrow(-2, n - i, frames));
  }
  return acc / denom;
}

torch::Tensor LfccExtractor::Forward(const torch::Tensor& samples) const {
  if (samples.dim() != 1 && samples.dim() != 2) {
    Fail(ErrorCode::kDimensionMismatch, "LFCC input must be [T] or [B, T]");
  }
  const int win = cfg_.WindowLength();
  if (samples.size(-1) < win) {
    Fail(ErrorCode::kTooShort,
         "waveform shorter than one analysis window (" +
             std::to_string(samples.size(-1)) + " < " + std::to_string(win) +
             " samples)");
  }
  const auto dtype = samples.scalar_type();
  const auto dev = samples.device();
  const auto frames = samples.unfold(-1, win, cfg_.HopLength()) *
                      window_.to(dev, dtype);
  const auto spec = torch::fft::rfft(frames, cfg_.n_fft, -1);
  const auto power = torch::view_as_real(spec).pow(2).sum(-1);
  const auto logfb =
      torch::log(torch::matmul(power, filterbank_.to(dev, dtype)) +
                 cfg_.log_floor);
  auto cep = torch::matmul(logfb, dct_.to(dev, dtype));
  if (!cfg_.include_deltas) return cep;
  const auto d1 = Deltas(cep);
  const auto d2 = Deltas(d1);
  return torch::cat({cep, d1, d2}, -1);
}

FeatureMatrix ExtractLfcc(const Waveform& w, const LfccConfig& cfg) {
  if (w.sample_rate != cfg.sample_rate) {
    Fail(ErrorCode::kInvalidArgument,
         "waveform is " + std::to_string(w.sample_rate) +
             " Hz but LFCC expects " + std::to_string(cfg.sample_rate) +
             " Hz");
  }
  LfccExtractor extractor(cfg);
  torch::NoGradGuard no_grad;
  FeatureMatrix out;
  out.values = extractor.Forward(ToTensor(w, torch::kFloat64))
                   .to(torch::kFloat32);
  out.frame_hop_s = cfg.hop_ms / 1000.0;
  out.frame_len_s = cfg.win_ms / 1000.0;
  return out;
}

}  // namespace advpost
