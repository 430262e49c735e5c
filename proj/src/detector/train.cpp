// src/detector/train.cpp

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

#include "advpost/detector/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "advpost/detector/eer.hpp"
#include "advpost/error.hpp"
#include "advpost/io/checkpoint.hpp"

namespace advpost {
namespace {

struct Example {
  torch::Tensor feats;  // [frames, dim], float32
  float label;
};

std::vector<torch::Tensor> Featurize(const std::vector<Waveform>& clips,
                                     const LfccExtractor& extractor) {
  torch::NoGradGuard no_grad;
  std::vector<torch::Tensor> out;
  out.reserve(clips.size());
  for (const auto& w : clips) {
    if (w.sample_rate != extractor.config().sample_rate) {
      Fail(ErrorCode::kInvalidArgument,
           "training clip sample rate differs from the LFCC configuration");
    }
    out.push_back(
        extractor.Forward(ToTensor(w, torch::kFloat64)).to(torch::kFloat32));
  }
  return out;
}

// Random crop when longer than `frames`, cyclic tiling when shorter.
torch::Tensor CropOrTile(const torch::Tensor& feats, int frames,
                         std::mt19937_64& rng) {
  const int64_t n = feats.size(0);
  if (n == frames) return feats;
  if (n > frames) {
    std::uniform_int_distribution<int64_t> pick(0, n - frames);
    return feats.narrow(0, pick(rng), frames);
  }
  const int64_t reps = (frames + n - 1) / n;
  return feats.repeat({reps, 1}).narrow(0, 0, frames);
}

struct Evaluation {
  double loss;
  double eer;
};

Evaluation Evaluate(const DetectorModel& model,
                    const std::vector<Example>& val) {
  torch::NoGradGuard no_grad;
  std::vector<double> pos, neg;
  double loss = 0.0;
  for (const auto& ex : val) {
    const double p =
        torch::sigmoid(model.Logits(ex.feats)).item<double>();
    const double clamped = std::clamp(p, 1e-12, 1.0 - 1e-12);
    loss -= ex.label > 0.5f ? std::log(clamped) : std::log(1.0 - clamped);
    (ex.label > 0.5f ? pos : neg).push_back(p);
  }
  return {loss / static_cast<double>(val.size()), ComputeEer(pos, neg).eer};
}

}  // namespace

void DetectorTrainConfig::Validate() const {
  auto bad = [](const std::string& why) {
    Fail(ErrorCode::kInvalidConfig, "detector training: " + why);
  };
  if (epochs < 1) bad("epochs must be >= 1");
  if (batch_size < 1) bad("batch_size must be >= 1");
  if (!(learning_rate > 0)) bad("learning_rate must be > 0");
  if (crop_frames < 1) bad("crop_frames must be >= 1");
  if (!(val_fraction > 0 && val_fraction < 1)) bad("val_fraction must be in (0, 1)");
}

torch::Tensor BinaryCrossEntropy(const torch::Tensor& probs,
                                 const torch::Tensor& labels) {
  const auto p = probs.clamp(1e-12, 1.0 - 1e-12);
  return -(labels * torch::log(p) + (1 - labels) * torch::log(1 - p)).mean();
}

DetectorTrainResult TrainDetector(
    const std::vector<Waveform>& positives,
    const std::vector<Waveform>& negatives, const DetectorArch& arch,
    const LfccConfig& lfcc, const DetectorTrainConfig& cfg,
    const std::function<void(const DetectorEpochLog&)>& on_epoch) {
  cfg.Validate();
  if (positives.empty()) Fail(ErrorCode::kEmptyInput, "no positive (target) clips");
  if (negatives.empty()) Fail(ErrorCode::kEmptyInput, "no negative clips");
  if (positives.size() < 2 || negatives.size() < 2) {
    Fail(ErrorCode::kEmptyInput, "need >= 2 clips per class to hold out validation");
  }

  torch::manual_seed(cfg.seed);
  std::mt19937_64 rng(cfg.seed);
  const LfccExtractor extractor(lfcc);

  std::vector<Example> train, val;
  auto split = [&](const std::vector<Waveform>& clips, float label) {
    auto feats = Featurize(clips, extractor);
    std::vector<std::size_t> order(feats.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    auto n_val = static_cast<std::size_t>(
        std::lround(cfg.val_fraction * static_cast<double>(feats.size())));
    n_val = std::clamp<std::size_t>(n_val, 1, feats.size() - 1);
    for (std::size_t i = 0; i < order.size(); ++i) {
      (i < n_val ? val : train).push_back({feats[order[i]], label});
    }
  };
  split(positives, 1.0f);
  split(negatives, 0.0f);

  DetectorTrainResult result{DetectorModel(arch, lfcc), 0, 2.0, {}, {}};
  DetectorModel& model = result.model;
  torch::optim::Adam optimizer(model.net()->parameters(),
                               torch::optim::AdamOptions(cfg.learning_rate));

  std::vector<std::pair<std::string, torch::Tensor>> best_state;
  double best_val_loss = 0.0;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    model.net()->train();
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    int batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::vector<torch::Tensor> xs;
      std::vector<float> ys;
      for (std::size_t i = start; i < end; ++i) {
        xs.push_back(CropOrTile(train[order[i]].feats, cfg.crop_frames, rng));
        ys.push_back(train[order[i]].label);
      }
      // BatchNorm needs more than one value per channel in train mode.
      if (xs.size() < 2) continue;
      const auto x = torch::stack(xs);
      const auto y = torch::tensor(ys);
      const auto loss = BinaryCrossEntropy(model.Probability(x), y);
      const double value = loss.item<double>();
      if (!std::isfinite(value)) {
        Fail(ErrorCode::kNonFinite,
             "detector loss is not finite at epoch " + std::to_string(epoch) +
                 ", batch " + std::to_string(batches));
      }
      optimizer.zero_grad();
      loss.backward();
      optimizer.step();
      result.step_losses.push_back(value);
      epoch_loss += value;
      ++batches;
    }

    model.net()->eval();
    const auto ev = Evaluate(model, val);
    DetectorEpochLog log{epoch, batches ? epoch_loss / batches : 0.0, ev.loss, ev.eer};
    result.epochs.push_back(log);
    if (on_epoch) on_epoch(log);

    const bool better = ev.eer < result.best_val_eer ||
                        (ev.eer == result.best_val_eer && ev.loss < best_val_loss);
    if (better) {
      result.best_val_eer = ev.eer;
      result.best_epoch = epoch;
      best_val_loss = ev.loss;
      best_state.clear();
      for (const auto& [name, t] : ModuleState(*model.net())) {
        best_state.emplace_back(name, t.detach().clone());
      }
    }
  }

  LoadModuleState(*model.net(), best_state);
  model.net()->eval();
  return result;
}

}  // namespace advpost
