// src/adv/losses.cpp

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

#include "advpost/adv/losses.hpp"

#include <cmath>

#include "advpost/error.hpp"

namespace advpost {

nlohmann::json ToJson(const LossBreakdown& b) {
  return {{"L_A", b.L_A}, {"L_r", b.L_r}, {"L_m", b.L_m}, {"L_s", b.L_s},
          {"L_R", b.L_R}, {"L", b.L},     {"lambda_A", b.lambda_A},
          {"lambda_R", b.lambda_R}};
}

LossBreakdown LossTerms::Values(const LossWeights& w) const {
  LossBreakdown b;
  b.L_A = adversarial.item<double>();
  b.L_r = range.item<double>();
  b.L_m = mse.item<double>();
  b.L_s = modification.item<double>();
  // Recombined in double so the logged identities hold exactly.
  b.L_R = b.L_r + b.L_m + b.L_s;
  b.lambda_A = w.lambda_A;
  b.lambda_R = w.lambda_R;
  b.L = w.lambda_A * b.L_A + w.lambda_R * b.L_R;
  return b;
}

torch::Tensor ModificationMagnitude(const torch::Tensor& residual,
                                    const torch::Tensor& original) {
  if (residual.sizes() != original.sizes()) {
    Fail(ErrorCode::kLengthMismatch, "residual and original differ in shape");
  }
  const auto a = residual.abs();
  return a / (a + original.abs() + kModificationEpsilon);
}

std::vector<double> ModificationMagnitude(const Waveform& residual,
                                          const Waveform& original) {
  if (residual.size() != original.size()) {
    Fail(ErrorCode::kLengthMismatch,
         "residual has " + std::to_string(residual.size()) +
             " samples, original " + std::to_string(original.size()));
  }
  std::vector<double> m(residual.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double p = std::fabs(static_cast<double>(residual.samples[i]));
    const double s = std::fabs(static_cast<double>(original.samples[i]));
    m[i] = p / (p + s + kModificationEpsilon);
  }
  return m;
}

torch::Tensor AdversarialLoss(const DetectorModel& detector,
                              const LfccExtractor& lfcc,
                              const torch::Tensor& processed, bool log_domain) {
  if (detector.lfcc() != lfcc.config()) {
    Fail(ErrorCode::kDimensionMismatch,
         "LFCC configuration differs from the one the detector was trained with");
  }
  const auto feats = lfcc.Forward(processed);
  // Features follow the detector's precision so a float64 detector gives a
  // float64 loss end to end.
  const auto dtype = detector.net()->parameters().front().scalar_type();
  const auto logits = detector.Logits(feats.to(dtype));
  if (log_domain) return -torch::log_sigmoid(logits);
  return 1.0 - torch::sigmoid(logits);
}

RegularizationTerms RegularizationLoss(const torch::Tensor& residual,
                                       const torch::Tensor& original) {
  if (residual.sizes() != original.sizes()) {
    Fail(ErrorCode::kLengthMismatch, "residual and original differ in shape");
  }
  if (residual.numel() == 0) {
    Fail(ErrorCode::kEmptyInput, "regularization needs at least one sample");
  }
  const auto p = residual.dim() == 1 ? residual.unsqueeze(0) : residual;
  RegularizationTerms t;
  t.range = (std::get<0>(p.max(1)) - std::get<0>(p.min(1))).mean();
  t.mse = residual.pow(2).mean();
  t.modification = ModificationMagnitude(residual, original).mean();
  return t;
}

LossTerms TotalLoss(const DetectorModel& detector, const LfccExtractor& lfcc,
                    const torch::Tensor& original, const torch::Tensor& residual,
                    const LossWeights& weights) {
  if (!(weights.lambda_A >= 0) || !(weights.lambda_R >= 0)) {
    Fail(ErrorCode::kInvalidArgument, "loss weights must be >= 0");
  }
  const auto reg = RegularizationLoss(residual, original);
  LossTerms t;
  t.adversarial = AdversarialLoss(detector, lfcc, original + residual,
                                  weights.log_domain_adversarial)
                      .mean();
  t.range = reg.range;
  t.mse = reg.mse;
  t.modification = reg.modification;
  t.regularization = t.range + t.mse + t.modification;
  t.total = weights.lambda_A * t.adversarial + weights.lambda_R * t.regularization;
  return t;
}

}  // namespace advpost
