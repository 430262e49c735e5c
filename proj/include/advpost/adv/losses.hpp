// include/advpost/adv/losses.hpp

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

#ifndef ADVPOST_ADV_LOSSES_HPP_
#define ADVPOST_ADV_LOSSES_HPP_

#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "advpost/detector/detector.hpp"
#include "advpost/dsp/lfcc.hpp"
#include "advpost/dsp/waveform.hpp"

namespace advpost {

/// Offset in the per-sample modification ratio. Fixed so that values are
/// comparable across runs.
inline constexpr double kModificationEpsilon = 1e-4;

struct LossWeights {
  double lambda_A = 1.0;
  double lambda_R = 20.0;
  /// Use -log(D_t) in place of 1 - D_t for the adversarial term.
  bool log_domain_adversarial = false;

  bool operator==(const LossWeights&) const = default;
};

/// Scalar values of every loss term for one step or one evaluation.
struct LossBreakdown {
  double L_A = 0.0;
  double L_r = 0.0;
  double L_m = 0.0;
  double L_s = 0.0;
  double L_R = 0.0;
  double L = 0.0;
  double lambda_A = 1.0;
  double lambda_R = 20.0;
};

nlohmann::json ToJson(const LossBreakdown& b);

/// Differentiable terms. Each is already reduced over the batch.
struct LossTerms {
  torch::Tensor adversarial;
  torch::Tensor range;
  torch::Tensor mse;
  torch::Tensor modification;
  torch::Tensor regularization;
  torch::Tensor total;

  LossBreakdown Values(const LossWeights& w) const;
};

/// |P| / (|P| + |s| + 1e-4), elementwise; any matching shapes.
torch::Tensor ModificationMagnitude(const torch::Tensor& residual,
                                    const torch::Tensor& original);

/// Same on waveforms; kLengthMismatch when lengths differ.
std::vector<double> ModificationMagnitude(const Waveform& residual,
                                          const Waveform& original);

/// 1 - D_t(F(processed)) per utterance, [B] for [B, T] input (or a scalar
/// for [T]). With `log_domain`, -log D_t instead. Gradients reach
/// `processed` through both the detector and the LFCC front-end.
torch::Tensor AdversarialLoss(const DetectorModel& detector,
                              const LfccExtractor& lfcc,
                              const torch::Tensor& processed,
                              bool log_domain = false);

/// Regularisation terms for residual/original of shape [T] or [B, T]:
///   range        max(P) - min(P) per utterance, averaged over the batch
///   mse          mean(P^2) over all samples
///   modification mean(M_t) over all samples
/// Throws kEmptyInput for zero-length input and kLengthMismatch on shape
/// disagreement.
struct RegularizationTerms {
  torch::Tensor range;
  torch::Tensor mse;
  torch::Tensor modification;
};
RegularizationTerms RegularizationLoss(const torch::Tensor& residual,
                                       const torch::Tensor& original);

/// L = lambda_A * L_A + lambda_R * (L_r + L_m + L_s) on s + P(s), without
/// clipping so gradients are exact for the unclipped sum.
LossTerms TotalLoss(const DetectorModel& detector, const LfccExtractor& lfcc,
                    const torch::Tensor& original, const torch::Tensor& residual,
                    const LossWeights& weights);

}  // namespace advpost

#endif  // ADVPOST_ADV_LOSSES_HPP_
