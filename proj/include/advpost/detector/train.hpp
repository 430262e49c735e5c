// include/advpost/detector/train.hpp

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

#ifndef ADVPOST_DETECTOR_TRAIN_HPP_
#define ADVPOST_DETECTOR_TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "advpost/detector/detector.hpp"
#include "advpost/dsp/waveform.hpp"

namespace advpost {

struct DetectorTrainConfig {
  int epochs = 20;
  int batch_size = 32;
  double learning_rate = 1e-3;
  /// Training crops (or tiles) features to this many frames; 400 ~ 4 s.
  int crop_frames = 400;
  double val_fraction = 0.1;
  uint64_t seed = 0;

  void Validate() const;
  bool operator==(const DetectorTrainConfig&) const = default;
};

struct DetectorEpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_eer = 0.0;
};

struct DetectorTrainResult {
  DetectorModel model;
  int best_epoch = 0;
  double best_val_eer = 1.0;
  std::vector<DetectorEpochLog> epochs;
  /// Mini-batch BCE in step order.
  std::vector<double> step_losses;
};

/// Mean binary cross-entropy of probabilities against 0/1 labels.
torch::Tensor BinaryCrossEntropy(const torch::Tensor& probs,
                                 const torch::Tensor& labels);

/// Trains on natural target-speaker clips (positives) against everything
/// else (negatives) with binary cross-entropy and Adam.
///
/// A stratified val_fraction of each class is held out. After every epoch
/// the model is scored on it; the returned model is the checkpoint with the
/// lowest validation EER, ties going to the lower validation loss. The
/// returned model is in eval mode.
///
/// Throws kEmptyInput for an empty class and kNonFinite if a mini-batch
/// loss is not finite.
DetectorTrainResult TrainDetector(
    const std::vector<Waveform>& positives,
    const std::vector<Waveform>& negatives, const DetectorArch& arch,
    const LfccConfig& lfcc, const DetectorTrainConfig& cfg,
    const std::function<void(const DetectorEpochLog&)>& on_epoch = {});

}  // namespace advpost

#endif  // ADVPOST_DETECTOR_TRAIN_HPP_
