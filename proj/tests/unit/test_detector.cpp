// tests/unit/test_detector.cpp

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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "advpost/detector/detector.hpp"
#include "advpost/detector/eer.hpp"
#include "advpost/detector/train.hpp"
#include "advpost/io/checkpoint.hpp"
#include "eer_reference.hpp"
#include "test_util.hpp"

namespace advpost {
namespace {

TEST(Eer, AgreesWithBruteForceSweep) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> size(1, 50);
    std::uniform_int_distribution<int> level(0, 9);  // coarse scores force ties
    std::vector<double> pos(size(rng)), neg(size(rng));
    for (double& s : pos) s = trial % 2 ? level(rng) / 10.0 : std::normal_distribution<>(1, 1)(rng);
    for (double& s : neg) s = trial % 2 ? level(rng) / 10.0 : std::normal_distribution<>(0, 1)(rng);
    EXPECT_NEAR(ComputeEer(pos, neg).eer, testing::BruteForceEer(pos, neg), 1e-12)
        << "trial " << trial;
  }
}

TEST(Eer, PerfectInvertedAndTied) {
  const std::vector<double> hi = {0.8, 0.9, 0.95}, lo = {0.1, 0.2};
  EXPECT_DOUBLE_EQ(ComputeEer(hi, lo).eer, 0.0);
  EXPECT_DOUBLE_EQ(ComputeEer(lo, hi).eer, 1.0);
  const std::vector<double> same = {0.5, 0.5};
  EXPECT_DOUBLE_EQ(ComputeEer(same, same).eer, 0.5);
}

TEST(Eer, InvariantToIncreasingTransform) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> pos(40), neg(30);
  for (double& s : pos) s = g(rng) + 0.7;
  for (double& s : neg) s = g(rng);
  auto pos2 = pos, neg2 = neg;
  for (double& s : pos2) s = std::exp(3 * s);
  for (double& s : neg2) s = std::exp(3 * s);
  EXPECT_NEAR(ComputeEer(pos, neg).eer, ComputeEer(pos2, neg2).eer, 1e-12);
}

TEST(Eer, EmptyInputRejected) {
  const std::vector<double> some = {0.1}, none;
  EXPECT_ADVPOST_ERROR(ComputeEer(none, some), ErrorCode::kEmptyInput);
  EXPECT_ADVPOST_ERROR(ComputeEer(some, none), ErrorCode::kEmptyInput);
}

TEST(Detector, ShapesAndProbabilityRange) {
  torch::manual_seed(0);
  DetectorArch arch;
  arch.base_channels = 4;
  arch.blocks_per_stage = {1, 1};
  DetectorModel model(arch, LfccConfig{});
  model.net()->eval();
  const auto feats = torch::randn({3, 50, 60});
  const auto p = model.Probability(feats);
  ASSERT_EQ(p.sizes(), torch::IntArrayRef({3}));
  EXPECT_TRUE((p > 0).all().item<bool>());
  EXPECT_TRUE((p < 1).all().item<bool>());
  EXPECT_ADVPOST_ERROR(model.Logits(torch::randn({3, 50, 59})), ErrorCode::kDimensionMismatch);
  const double s = model.ScoreWaveform(testing::RandomWaveform(8000, 1));
  EXPECT_GT(s, 0.0);
  EXPECT_LT(s, 1.0);
}

TEST(Detector, ZeroInitHeadScoresOneHalf) {
  DetectorArch arch;
  arch.base_channels = 4;
  arch.blocks_per_stage = {1};
  arch.zero_init_head = true;
  DetectorModel model(arch, LfccConfig{});
  model.net()->eval();
  EXPECT_DOUBLE_EQ(model.ScoreWaveform(testing::RandomWaveform(4000, 2)), 0.5);
}

TEST(Detector, FullDepthArchitecture) {
  const auto full = DetectorArch::FullDepth();
  EXPECT_EQ(full.base_channels, 64);
  EXPECT_EQ(full.blocks_per_stage, (std::vector<int>{3, 4, 6, 3}));
  DetectorArch bad;
  bad.blocks_per_stage = {};
  EXPECT_ADVPOST_ERROR(bad.Validate(), ErrorCode::kInvalidConfig);
}

TEST(Detector, CheckpointRoundTripIsExact) {
  torch::manual_seed(1);
  DetectorArch arch;
  arch.base_channels = 4;
  arch.blocks_per_stage = {1, 1};
  DetectorModel model(arch, LfccConfig{});
  model.net()->eval();
  const auto dir = testing::TempDir("det");
  model.Save(dir / "a.ckpt");
  const auto loaded = DetectorModel::Load(dir / "a.ckpt");
  const auto w = testing::RandomWaveform(6000, 9);
  EXPECT_EQ(model.ScoreWaveform(w), loaded.ScoreWaveform(w));
  EXPECT_EQ(loaded.arch(), arch);
  loaded.Save(dir / "b.ckpt");
  EXPECT_EQ(Sha256File(dir / "a.ckpt"), Sha256File(dir / "b.ckpt"));
}

TEST(Checkpoint, RejectsWrongKindMissingAndCorrupt) {
  const auto dir = testing::TempDir("ckpt");
  Checkpoint c;
  c.kind = "thing";
  c.tensors.emplace_back("x", torch::arange(4, torch::kFloat64));
  c.blobs["b"] = std::string("\0\1\2", 3);
  SaveCheckpoint(c, dir / "c.ckpt");
  const auto back = LoadCheckpoint(dir / "c.ckpt", "thing");
  EXPECT_TRUE(torch::equal(back.tensors.at(0).second, c.tensors.at(0).second));
  EXPECT_EQ(back.blobs.at("b"), c.blobs.at("b"));
  EXPECT_ADVPOST_ERROR(LoadCheckpoint(dir / "c.ckpt", "other"), ErrorCode::kBadCheckpoint);
  EXPECT_ADVPOST_ERROR(LoadCheckpoint(dir / "none.ckpt", "thing"), ErrorCode::kMissingArtifact);
  std::ofstream(dir / "bad.ckpt") << "ADVPOSTCgarbage";
  EXPECT_ADVPOST_ERROR(LoadCheckpoint(dir / "bad.ckpt", "thing"), ErrorCode::kBadCheckpoint);
}

TEST(DetectorTraining, SeparatesToneFromNoise) {
  std::vector<Waveform> pos, neg;
  for (int i = 0; i < 12; ++i) {
    pos.push_back(testing::Tone(300.0 + 20 * i, 0.5, 0.3));
    neg.push_back(testing::RandomWaveform(8000, 50 + i, 0.3));
  }
  DetectorArch arch;
  arch.base_channels = 4;
  arch.blocks_per_stage = {1, 1};
  DetectorTrainConfig cfg;
  cfg.epochs = 12;  // enough steps for the normalisation statistics to settle
  cfg.batch_size = 8;
  cfg.learning_rate = 3e-3;
  cfg.crop_frames = 40;
  cfg.val_fraction = 0.25;
  cfg.seed = 5;
  int epochs_seen = 0;
  const auto r = TrainDetector(pos, neg, arch, LfccConfig{}, cfg,
                               [&](const DetectorEpochLog&) { ++epochs_seen; });
  EXPECT_EQ(epochs_seen, 12);
  EXPECT_FALSE(r.model.net()->is_training());
  EXPECT_DOUBLE_EQ(r.best_val_eer, 0.0);
  EXPECT_GT(r.model.ScoreWaveform(testing::Tone(390.0, 0.5, 0.3)),
            r.model.ScoreWaveform(testing::RandomWaveform(8000, 999, 0.3)));
  // Same seed, same result.
  const auto again = TrainDetector(pos, neg, arch, LfccConfig{}, cfg);
  EXPECT_EQ(again.step_losses, r.step_losses);
}

TEST(DetectorTraining, RejectsTooFewClips) {
  std::vector<Waveform> one = {testing::Tone(300, 0.5)};
  std::vector<Waveform> two = {testing::Tone(300, 0.5), testing::Tone(310, 0.5)};
  DetectorArch arch;
  arch.base_channels = 4;
  arch.blocks_per_stage = {1};
  EXPECT_ADVPOST_ERROR(TrainDetector(one, two, arch, LfccConfig{}, DetectorTrainConfig{}),
                       ErrorCode::kEmptyInput);
}

TEST(Bce, MatchesFormula) {
  const auto p = torch::tensor({0.9, 0.2}, torch::kFloat64);
  const auto y = torch::tensor({1.0, 0.0}, torch::kFloat64);
  const double want = -(std::log(0.9) + std::log(0.8)) / 2;
  EXPECT_NEAR(BinaryCrossEntropy(p, y).item<double>(), want, 1e-12);
}

}  // namespace
}  // namespace advpost
