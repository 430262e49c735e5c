// src/adv/trainer.cpp

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

#include "advpost/adv/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "advpost/error.hpp"
#include "advpost/io/checkpoint.hpp"

namespace advpost {
namespace {

class FrozenDetector {
 public:
  explicit FrozenDetector(DetectorModel& d) : net_(d.net()) {
    was_training_ = net_->is_training();
    for (auto& p : net_->parameters()) {
      requires_grad_.push_back(p.requires_grad());
      p.set_requires_grad(false);
    }
    net_->eval();
  }
  ~FrozenDetector() {
    auto params = net_->parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
      params[i].set_requires_grad(requires_grad_[i]);
    }
    net_->train(was_training_);
  }
  FrozenDetector(const FrozenDetector&) = delete;
  FrozenDetector& operator=(const FrozenDetector&) = delete;

 private:
  DetectorNet net_;
  bool was_training_;
  std::vector<bool> requires_grad_;
};

std::unique_ptr<torch::optim::Optimizer> MakeOptimizer(
    const std::string& name, std::vector<torch::Tensor> params, double lr) {
  if (name == "adam") {
    return std::make_unique<torch::optim::Adam>(std::move(params),
                                                torch::optim::AdamOptions(lr));
  }
  if (name == "sgd") {
    return std::make_unique<torch::optim::SGD>(std::move(params),
                                               torch::optim::SGDOptions(lr));
  }
  Fail(ErrorCode::kInvalidConfig, "unknown optimizer '" + name + "'");
}

void SetLearningRate(torch::optim::Optimizer& opt, double lr) {
  for (auto& group : opt.param_groups()) group.options().set_lr(lr);
}

void SaveTrainingCheckpoint(const std::filesystem::path& path,
                            const ResidualGenerator& generator,
                            torch::optim::Optimizer& optimizer,
                            const std::mt19937_64& rng, int64_t step) {
  torch::serialize::OutputArchive archive;
  optimizer.save(archive);
  std::ostringstream opt_bytes;
  archive.save_to(opt_bytes);
  std::ostringstream rng_state;
  rng_state << rng;

  Checkpoint ckpt;
  ckpt.kind = "generator";
  ckpt.meta["arch"] = ToJson(generator->arch());
  ckpt.meta["step"] = step;
  ckpt.tensors = ModuleState(*generator);
  ckpt.blobs["optimizer"] = opt_bytes.str();
  ckpt.blobs["rng"] = rng_state.str();
  SaveCheckpoint(ckpt, path);
}

}  // namespace

double TrainSchedule::LearningRateAt(int64_t step) const {
  const auto it = std::upper_bound(decay_boundaries.begin(),
                                   decay_boundaries.end(), step);
  return learning_rates[static_cast<std::size_t>(it - decay_boundaries.begin())];
}

void TrainSchedule::Validate() const {
  auto bad = [](const std::string& why) {
    Fail(ErrorCode::kInvalidConfig, "train: " + why);
  };
  if (learning_rates.size() != decay_boundaries.size() + 1) {
    bad("need exactly one more learning rate than decay boundaries");
  }
  for (double lr : learning_rates) {
    if (!(lr > 0)) bad("learning rates must be > 0");
  }
  for (std::size_t i = 1; i < decay_boundaries.size(); ++i) {
    if (decay_boundaries[i] <= decay_boundaries[i - 1]) {
      bad("decay boundaries must be strictly increasing");
    }
  }
  if (total_steps < 0) bad("total_steps must be >= 0");
  if (batch_size < 1) bad("batch_size must be >= 1");
  if (!(crop_seconds > 0)) bad("crop_seconds must be > 0");
  if (optimizer != "adam" && optimizer != "sgd") bad("optimizer must be adam or sgd");
  if (!(init_residual_ratio >= 0)) bad("init_residual_ratio must be >= 0");
  if (checkpoint_every < 1) bad("checkpoint_every must be >= 1");
  if (!(weights.lambda_A >= 0)) bad("lambda_A must be >= 0");
  if (!(weights.lambda_R >= 0)) bad("lambda_R must be >= 0");
}

nlohmann::json ToJson(const RgnStepLog& log) {
  const auto& b = log.losses;
  return {{"step", log.step}, {"lr", log.lr},   {"L_A", b.L_A},
          {"L_r", b.L_r},     {"L_m", b.L_m},   {"L_s", b.L_s},
          {"L_R", b.L_R},     {"L", b.L}};
}

RgnTrainResult TrainRgn(ResidualGenerator& generator, DetectorModel& detector,
                        const std::vector<Waveform>& corpus,
                        const TrainSchedule& schedule,
                        const RgnTrainOptions& options) {
  schedule.Validate();
  if (corpus.empty()) Fail(ErrorCode::kEmptyInput, "RGN training corpus is empty");
  const int rate = detector.lfcc().sample_rate;
  std::size_t shortest = corpus.front().size();
  for (const auto& w : corpus) {
    if (w.sample_rate != rate) {
      Fail(ErrorCode::kInvalidArgument, "corpus sample rate differs from the detector's");
    }
    shortest = std::min(shortest, w.size());
  }
  const auto crop = static_cast<int64_t>(std::min<double>(
      static_cast<double>(shortest), std::round(schedule.crop_seconds * rate)));
  if (crop < detector.lfcc().WindowLength()) {
    Fail(ErrorCode::kTooShort, "training clips are shorter than one LFCC window");
  }

  FrozenDetector frozen(detector);
  const LfccExtractor lfcc(detector.lfcc());
  generator->train();

  std::mt19937_64 rng(schedule.seed);
  auto optimizer = MakeOptimizer(schedule.optimizer, generator->parameters(),
                                 schedule.LearningRateAt(0));
  int64_t step = 0;

  auto draw_batch = [&]() {
    std::uniform_int_distribution<std::size_t> pick(0, corpus.size() - 1);
    std::vector<torch::Tensor> rows;
    for (int b = 0; b < schedule.batch_size; ++b) {
      const auto& w = corpus[pick(rng)];
      std::uniform_int_distribution<int64_t> offset(
          0, static_cast<int64_t>(w.size()) - crop);
      rows.push_back(ToTensor(w).narrow(0, offset(rng), crop));
    }
    return torch::stack(rows);
  };

  if (!options.resume_from.empty()) {
    const auto ckpt = LoadCheckpoint(options.resume_from, "generator");
    if (GeneratorArchFromJson(ckpt.meta.at("arch")) != generator->arch()) {
      Fail(ErrorCode::kBadCheckpoint, "resume checkpoint has a different architecture");
    }
    LoadModuleState(*generator, ckpt.tensors);
    step = ckpt.meta.value("step", int64_t{0});
    if (auto it = ckpt.blobs.find("optimizer"); it != ckpt.blobs.end()) {
      torch::serialize::InputArchive archive;
      std::istringstream in(it->second);
      archive.load_from(in);
      optimizer->load(archive);
    }
    if (auto it = ckpt.blobs.find("rng"); it != ckpt.blobs.end()) {
      std::istringstream in(it->second);
      in >> rng;
    }
  } else if (schedule.init_residual_ratio > 0) {
    // Calibrate on a batch drawn from a separate stream so the training
    // sequence is the same whether or not calibration runs.
    std::mt19937_64 saved = rng;
    rng.seed(schedule.seed ^ 0x9E3779B97F4A7C15ULL);
    generator->CalibrateOutput(draw_batch(), schedule.init_residual_ratio);
    rng = saved;
  }

  const int64_t end = options.max_steps > 0
                          ? std::min(schedule.total_steps, options.max_steps)
                          : schedule.total_steps;
  RgnTrainResult result;
  for (; step < end; ++step) {
    const double lr = schedule.LearningRateAt(step);
    SetLearningRate(*optimizer, lr);
    const auto original = draw_batch();
    const auto residual = generator->forward(original);
    const auto terms = TotalLoss(detector, lfcc, original, residual, schedule.weights);
    const auto values = terms.Values(schedule.weights);
    if (!std::isfinite(values.L)) {
      if (!options.checkpoint_path.empty()) {
        SaveTrainingCheckpoint(options.checkpoint_path, generator, *optimizer, rng, step);
      }
      Fail(ErrorCode::kNonFinite,
           "RGN loss is not finite at step " + std::to_string(step) +
               (options.checkpoint_path.empty()
                    ? std::string()
                    : "; last good state saved to " + options.checkpoint_path.string()));
    }
    optimizer->zero_grad();
    terms.total.backward();
    optimizer->step();

    RgnStepLog log{step, lr, values};
    result.log.push_back(log);
    if (options.on_step) options.on_step(log);
    if (!options.checkpoint_path.empty() && (step + 1) % schedule.checkpoint_every == 0) {
      SaveTrainingCheckpoint(options.checkpoint_path, generator, *optimizer, rng, step + 1);
    }
  }
  result.final_step = step;
  if (!options.checkpoint_path.empty()) {
    SaveTrainingCheckpoint(options.checkpoint_path, generator, *optimizer, rng, step);
  }
  generator->eval();
  return result;
}

}  // namespace advpost
