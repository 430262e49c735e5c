// tests/unit/test_cli.cpp

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

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include "test_util.hpp"

namespace advpost {
namespace {

namespace fs = std::filesystem;

struct Run {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Run Cli(const fs::path& work, const std::string& args) {
  const std::string cmd = std::string("'") + ADVPOST_CLI_PATH + "' " + args + " > '" +
                          (work / "stdout.txt").string() + "' 2> '" + (work / "stderr.txt").string() +
                          "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Slurp(work / "stdout.txt");
  r.err = Slurp(work / "stderr.txt");
  return r;
}

nlohmann::json LastJsonLine(const std::string& text) {
  std::istringstream in(text);
  std::string line, last;
  while (std::getline(in, line)) {
    if (!line.empty()) last = line;
  }
  return nlohmann::json::parse(last);
}

// Small enough to run the whole pipeline in seconds.
constexpr const char* kTinyConfig = R"(seed: 3
detector:
  base_channels: 4
  blocks_per_stage: [1, 1]
  epochs: 2
  batch_size: 4
rgn:
  base_channels: 16
  dilations: [1]
train:
  batch_size: 2
  crop_seconds: 0.25
  checkpoint_every: 2
toy:
  clips_per_class: 6
  seconds: 0.5
  lead_in_s: 0.05
augment:
  copies_per_negative: 1
  force_surrogate_codec: true
eval:
  spectrogram_examples: 1
)";

TEST(Cli, EvalWithoutModelsIsMissingArtifact) {
  const auto dir = testing::TempDir("cli-missing");
  auto r = Cli(dir, "eval --out '" + (dir / "o").string() + "'");
  EXPECT_EQ(r.exit_code, 4) << r.err;
  auto j = LastJsonLine(r.err);
  EXPECT_EQ(j["exit_code"], 4);
  EXPECT_NE(j["message"].get<std::string>().find("detector checkpoint"), std::string::npos);

  const auto missing = (dir / "nowhere" / "det.ckpt").string();
  r = Cli(dir, "eval --out '" + (dir / "o").string() + "' --detectors '" + missing + "'");
  EXPECT_EQ(r.exit_code, 4);
  EXPECT_NE(LastJsonLine(r.err)["message"].get<std::string>().find(missing), std::string::npos);
}

TEST(Cli, ConfigErrorsAndUsage) {
  const auto dir = testing::TempDir("cli-config");
  std::ofstream(dir / "bad.yaml") << "train:\n  lambda_R: 20\n  warmup: 3\n";
  auto r = Cli(dir, "prepare --toy --config '" + (dir / "bad.yaml").string() + "' --out '" +
                        (dir / "o").string() + "'");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(LastJsonLine(r.err)["message"].get<std::string>().find("train.warmup"), std::string::npos);

  std::ofstream(dir / "neg.yaml") << "train:\n  lambda_R: -1\n";
  r = Cli(dir, "prepare --toy --config '" + (dir / "neg.yaml").string() + "' --out '" +
                   (dir / "o").string() + "'");
  EXPECT_EQ(r.exit_code, 3);

  r = Cli(dir, "train-rgn --no-such-flag");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(LastJsonLine(r.err)["error"], "usage");
}

TEST(Cli, ToyPipelineEndToEndAndDeterministicTraining) {
  const auto dir = testing::TempDir("cli-pipeline");
  std::ofstream(dir / "tiny.yaml") << kTinyConfig;
  const std::string cfg = " --config '" + (dir / "tiny.yaml").string() + "'";
  const auto data = dir / "data";

  auto r = Cli(dir, "prepare --toy" + cfg + " --out '" + data.string() + "' --jobs 2");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  ASSERT_TRUE(fs::exists(data / "manifest.jsonl"));
  ASSERT_TRUE(fs::exists(data / "resolved_config.yaml"));

  r = Cli(dir, "train-detector" + cfg + " --out '" + data.string() + "' --manifest '" +
                   (data / "manifest.jsonl").string() + "' --name surrogate");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto det = data / "surrogate.ckpt";
  ASSERT_TRUE(fs::exists(det));

  auto train = [&](const std::string& name) {
    const auto out = dir / name;
    auto t = Cli(dir, "train-rgn" + cfg + " --seed 7 --steps 4 --out '" + out.string() +
                          "' --detector '" + det.string() + "' --manifest '" +
                          (data / "manifest.jsonl").string() + "'");
    EXPECT_EQ(t.exit_code, 0) << t.err;
    return out;
  };
  const auto a = train("rgn_a"), b = train("rgn_b");
  const auto log_a = Slurp(a / "train_log.jsonl");
  EXPECT_EQ(std::count(log_a.begin(), log_a.end(), '\n'), 4);
  EXPECT_EQ(log_a, Slurp(b / "train_log.jsonl"));
  const auto frozen = nlohmann::json::parse(Slurp(a / "frozen_detector.json"));
  EXPECT_EQ(frozen["sha256_before"], frozen["sha256_after"]);
  EXPECT_EQ(Slurp(a / "resolved_config.yaml"), Slurp(b / "resolved_config.yaml"));

  r = Cli(dir, "apply" + cfg + " --out '" + (dir / "proc").string() + "' --generator '" +
                   (a / "generator.ckpt").string() + "' --manifest '" + (data / "eval.jsonl").string() +
                   "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  ASSERT_TRUE(fs::exists(dir / "proc" / "processed.jsonl"));

  r = Cli(dir, "eval" + cfg + " --out '" + (dir / "eval").string() + "' --detectors '" + det.string() +
                   "' --manifest '" + (data / "eval.jsonl").string() + "' --processed '" +
                   (dir / "proc" / "processed.jsonl").string() + "' --generator '" +
                   (a / "generator.ckpt").string() + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto report = nlohmann::json::parse(Slurp(dir / "eval" / "report.json"));
  EXPECT_EQ(report["schema_version"], 1);
  EXPECT_EQ(report["dsr"].get<double>(),
            report["W"].get<double>() / (report["A"].get<double>() * report["N"].get<double>()));
  EXPECT_TRUE(fs::exists(dir / "eval" / "scores.csv"));

  r = Cli(dir, "report --out '" + (dir / "eval").string() + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("|"), std::string::npos);
}

}  // namespace
}  // namespace advpost
