// include/advpost/adv/trainer.hpp

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

#ifndef ADVPOST_ADV_TRAINER_HPP_
#define ADVPOST_ADV_TRAINER_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "advpost/adv/losses.hpp"
#include "advpost/detector/detector.hpp"
#include "advpost/rgn/generator.hpp"

namespace advpost {

/// Piecewise-constant learning rate plus the rest of the RGN training
/// setup. learning_rates[i] applies on steps [boundary[i-1], boundary[i]).
struct TrainSchedule {
  std::vector<double> learning_rates = {1e-4, 5e-5, 2.5e-5, 1.25e-5, 6.25e-6};
  std::vector<int64_t> decay_boundaries = {5000, 10000, 30000, 50000};
  int64_t total_steps = 60000;
  int batch_size = 8;
  uint64_t seed = 0;
  /// Training crop length; clips shorter than this shrink the crop.
  double crop_seconds = 4.0;
  /// "adam" or "sgd".
  std::string optimizer = "adam";
  /// Initial residual RMS as a fraction of signal RMS; 0 keeps the raw init.
  double init_residual_ratio = 0.01;
  int64_t checkpoint_every = 1000;
  LossWeights weights;

  double LearningRateAt(int64_t step) const;
  void Validate() const;
  bool operator==(const TrainSchedule&) const = default;
};

struct RgnStepLog {
  int64_t step = 0;
  double lr = 0.0;
  LossBreakdown losses;
};

nlohmann::json ToJson(const RgnStepLog& log);

struct RgnTrainOptions {
  /// Resume from this training checkpoint when nonempty.
  std::filesystem::path resume_from;
  /// Where periodic and final training checkpoints go; empty disables them.
  std::filesystem::path checkpoint_path;
  /// Stop after this step count instead of schedule.total_steps when > 0.
  int64_t max_steps = 0;
  std::function<void(const RgnStepLog&)> on_step;
};

struct RgnTrainResult {
  std::vector<RgnStepLog> log;
  int64_t final_step = 0;
};

/// Adversarial training of `generator` against a frozen `detector`.
///
/// For the duration of the call the detector is put in eval mode and its
/// parameters stop requiring gradients; both flags are restored on return.
/// Its parameters and buffers are never written.
///
/// Each step draws batch_size clips (with replacement) and a random crop of
/// each, computes TotalLoss on crop + P(crop), and takes one optimizer step
/// at LearningRateAt(step). A non-finite loss stops training before the
/// update, writes the last good checkpoint (if checkpoint_path is set) and
/// throws kNonFinite.
RgnTrainResult TrainRgn(ResidualGenerator& generator, DetectorModel& detector,
                        const std::vector<Waveform>& corpus,
                        const TrainSchedule& schedule,
                        const RgnTrainOptions& options = {});

}  // namespace advpost

#endif  // ADVPOST_ADV_TRAINER_HPP_
