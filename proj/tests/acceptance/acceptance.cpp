// tests/acceptance/acceptance.cpp

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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. The end-to-end toy run drives the command-line tool.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include "advpost/adv/trainer.hpp"
#include "advpost/augment/augment.hpp"
#include "advpost/detector/eer.hpp"
#include "advpost/dsp/lfcc.hpp"
#include "advpost/eval/report.hpp"
#include "advpost/io/checkpoint.hpp"
#include "advpost/toy/toy_corpus.hpp"
#include "eer_reference.hpp"
#include "lfcc_reference.hpp"
#include "loss_oracles.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using advpost::Waveform;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1
Outcome LossIdentities() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = advpost::testing::TinyLfcc();
  const auto det = advpost::testing::TinyDetector(1, cfg);
  const advpost::LfccExtractor lfcc(cfg);
  std::mt19937_64 rng(1);
  const advpost::LossWeights w;
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    auto [s, p] = advpost::testing::RandomPair(rng, 1, 64 + i % 64);
    const auto e = advpost::testing::CheckLossIdentities(det, lfcc, s, p, w);
    worst = std::max({worst, e.regularization_sum, e.total_sum});
  }
  const double secs = Seconds(t0);
  return {worst <= 1e-9 && secs < 10,
          "max abs error " + Fmt("%.3g", worst) + ", " + Fmt("%.2f", secs) + " s"};
}

// 2
Outcome ModificationOracle() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> scale(0, 6);
  const int64_t n = 100000;
  auto p = torch::empty({n}, torch::kFloat64);
  auto s = torch::empty({n}, torch::kFloat64);
  auto pa = p.accessor<double, 1>();
  auto sa = s.accessor<double, 1>();
  for (int64_t i = 0; i < n; ++i) {
    pa[i] = u(rng) * std::pow(10.0, -scale(rng));
    sa[i] = i % 10 == 0 ? 0.0 : u(rng) * std::pow(10.0, -scale(rng));
  }
  const auto m = advpost::ModificationMagnitude(p, s);
  auto ma = m.accessor<double, 1>();
  int64_t mismatches = 0, out_of_range = 0;
  for (int64_t i = 0; i < n; ++i) {
    mismatches += ma[i] != advpost::testing::ScalarMt(pa[i], sa[i]);
    out_of_range += !(ma[i] >= 0 && ma[i] < 1);
  }
  return {mismatches == 0 && out_of_range == 0,
          std::to_string(mismatches) + " mismatches, " + std::to_string(out_of_range) +
              " outside [0,1) over 1e5 pairs"};
}

// 3
Outcome GradientCheck() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    worst = std::max(worst, advpost::testing::GradientRelativeError(seed));
  }
  const double secs = Seconds(t0);
  return {worst <= 1e-3 && secs < 60,
          "max relative error " + Fmt("%.3g", worst) + " over 20 seeds, " + Fmt("%.2f", secs) + " s"};
}

// 4
Outcome LfccReference() {
  const advpost::LfccConfig cfg;
  double worst = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const auto w = advpost::testing::RandomWaveform(16000, 400 + seed);
    const auto got = advpost::ExtractLfcc(w, cfg).values.to(torch::kFloat64).contiguous();
    const auto want = advpost::testing::ReferenceLfcc(w.samples, cfg);
    if (got.size(0) != int64_t(want.size())) return {false, "frame count differs"};
    auto a = got.accessor<double, 2>();
    for (std::size_t t = 0; t < want.size(); ++t) {
      for (std::size_t j = 0; j < want[t].size(); ++j) worst = std::max(worst, std::abs(a[t][j] - want[t][j]));
    }
  }
  return {worst <= 1e-4, "max abs error " + Fmt("%.3g", worst) + " on 10 clips"};
}

// 5
Outcome EerOracle() {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> size(1, 50), level(0, 20);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> pos(size(rng)), neg(size(rng));
    const bool coarse = trial % 3 == 0;
    std::normal_distribution<double> g(0, 1);
    for (double& v : pos) v = coarse ? level(rng) : g(rng) + 0.7;
    for (double& v : neg) v = coarse ? level(rng) - 3 : g(rng);
    worst = std::max(worst, std::abs(advpost::ComputeEer(pos, neg).eer -
                                     advpost::testing::BruteForceEer(pos, neg)));
  }
  return {worst <= 1e-9, "max abs error " + Fmt("%.3g", worst) + " over 200 score sets"};
}

// 6 (constructed cases; the toy run adds the recount of a real evaluation)
Outcome DsrConstructed() {
  auto clip = [](const std::string& id, double v) {
    return advpost::EvalClip{id, Waveform{{static_cast<float>(v)}, 16000}};
  };
  auto read = [](std::string name, double sign) {
    return advpost::Scorer{name, [sign](const Waveform& w) { return sign * w.samples[0]; }};
  };
  std::vector<advpost::EvalClip> gen;
  for (int i = 0; i < 50; ++i) gen.push_back(clip("g" + std::to_string(i), 0.5 + 0.001 * i));
  auto fakes = [&](int fooled) {
    std::vector<advpost::EvalClip> f;
    for (int i = 0; i < 100; ++i) {
      f.push_back(clip("f" + std::to_string(i), i < fooled ? 0.9 - 0.001 * i : 0.1 + 0.001 * i));
    }
    return f;
  };
  const auto all = advpost::ComputeDsr({read("d", 1)}, fakes(100), gen);
  const auto none = advpost::ComputeDsr({read("d", 1)}, fakes(0), gen);
  const auto some = advpost::ComputeDsr({read("d", 1)}, fakes(47), gen);
  const auto half = advpost::ComputeDsr({read("inv", -1), read("d", 1)}, fakes(0), gen);
  bool ok = all.dsr == 1.0 && none.dsr == 0.0 && some.dsr == 0.47 && some.W == 47 && some.A == 100 &&
            half.dsr == 0.5;
  for (const auto* r : {&all, &none, &some, &half}) ok &= advpost::RecountDsr(r->table, r->N) == r->dsr;
  return {ok, "all " + Fmt("%g", all.dsr) + ", none " + Fmt("%g", none.dsr) + ", 47/100/1 " +
                  Fmt("%g", some.dsr) + ", 2 detectors " + Fmt("%g", half.dsr)};
}

std::string Slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int Cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string("'") + ADVPOST_CLI_PATH + "' " + args + " >> '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct ToyRun {
  bool ran = false;
  std::string failure;
  json report;
  json frozen;
  fs::path dir;
  double seconds = 0;
};

// Prepare, two independent detectors, RGN training, apply, eval; all
// through the CLI with the shipped toy configuration.
ToyRun RunToyPipeline() {
  ToyRun r;
  const auto t0 = std::chrono::steady_clock::now();
  r.dir = fs::temp_directory_path() / ("advpost-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(r.dir);
  fs::create_directories(r.dir);
  const auto log = r.dir / "pipeline.log";
  const std::string cfg = " --config '" + std::string(ADVPOST_TOY_CONFIG) + "'";
  const auto data = r.dir / "data";
  auto step = [&](const std::string& what, const std::string& args) {
    if (!r.failure.empty()) return;
    const int code = Cli(args + cfg, log);
    if (code != 0) r.failure = what + " exited " + std::to_string(code) + " (see " + log.string() + ")";
  };
  const std::string m = (data / "manifest.jsonl").string();
  step("prepare", "prepare --toy --no-augment --out '" + data.string() + "'");
  step("surrogate detector", "train-detector --manifest '" + m + "' --name surrogate --out '" + data.string() + "'");
  step("held-out detector", "train-detector --manifest '" + (data / "heldout.jsonl").string() +
                                "' --name heldout --out '" + data.string() + "'");
  step("train-rgn", "train-rgn --manifest '" + m + "' --detector '" + (data / "surrogate.ckpt").string() +
                        "' --out '" + (r.dir / "rgn").string() + "'");
  step("apply", "apply --manifest '" + (data / "eval.jsonl").string() + "' --generator '" +
                    (r.dir / "rgn" / "generator.ckpt").string() + "' --out '" + (r.dir / "proc").string() + "'");
  step("eval", "eval --detectors '" + (data / "heldout.ckpt").string() + "' --manifest '" +
                   (data / "eval.jsonl").string() + "' --processed '" +
                   (r.dir / "proc" / "processed.jsonl").string() + "' --generator '" +
                   (r.dir / "rgn" / "generator.ckpt").string() + "' --out '" + (r.dir / "eval").string() + "'");
  r.seconds = Seconds(t0);
  if (!r.failure.empty()) return r;
  r.report = json::parse(Slurp(r.dir / "eval" / "report.json"));
  r.frozen = json::parse(Slurp(r.dir / "rgn" / "frozen_detector.json"));
  r.ran = true;
  return r;
}

// 6, on the real evaluation: the reported DSR against a recount of scores.csv.
Outcome DsrRecount(const ToyRun& run) {
  if (!run.ran) return {false, run.failure};
  std::ifstream csv(run.dir / "eval" / "scores.csv");
  std::string line;
  std::getline(csv, line);
  int64_t fakes = 0, wrong = 0;
  std::set<std::string> dets;
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    if (f.size() != 6 || f[2] != "fake") continue;
    dets.insert(f[1]);
    ++fakes;
    wrong += f[5] == "1" || f[5] == "true";
  }
  const auto& d = run.report;
  const double recount = double(wrong) / double(fakes);
  const bool ok = d["W"].get<int64_t>() == wrong && d["A"].get<int64_t>() * d["N"].get<int64_t>() == fakes &&
                  d["dsr"].get<double>() == recount;
  return {ok, "report DSR " + Fmt("%.4f", d["dsr"].get<double>()) + ", recount " + Fmt("%.4f", recount)};
}

// 7
Outcome ToyTransfer(const ToyRun& run) {
  if (!run.ran) return {false, run.failure};
  const double before = run.report["eer_before"].get<double>();
  const double after = run.report["eer_after"].get<double>();
  const bool ok = after - before >= 0.10 && run.seconds < 15 * 60;
  return {ok, "held-out EER " + Fmt("%.3f", before) + " -> " + Fmt("%.3f", after) + ", pipeline " +
                  Fmt("%.0f", run.seconds) + " s"};
}

// 8
Outcome SilenceSparing(const ToyRun& run) {
  if (!run.ran) return {false, run.failure};
  const auto& f = run.report["silence_below_speech_fraction"];
  if (f.is_null()) return {false, "no utterance had both speech and silence"};
  const double frac = f.get<double>();
  return {frac >= 0.90, "silence below speech in " + Fmt("%.1f", 100 * frac) + "% of utterances (mean Mt speech " +
                            Fmt("%.2e", run.report["mean_Mt_speech"].get<double>()) + ", silence " +
                            Fmt("%.2e", run.report["mean_Mt_silence"].get<double>()) + ")"};
}

// 9
Outcome FrozenDetector(const ToyRun& run) {
  if (!run.ran) return {false, run.failure};
  const bool logged = run.frozen["sha256_before"] == run.frozen["sha256_after"];
  const std::string now = advpost::Sha256File(run.dir / "data" / "surrogate.ckpt");
  const bool ok = logged && now == run.frozen["sha256_before"].get<std::string>();
  return {ok, "sha256 " + now.substr(0, 16) + "... before and after training"};
}

// 10
Outcome LearningRateLog() {
  torch::manual_seed(10);
  advpost::DetectorArch arch;
  arch.base_channels = 4;
  arch.blocks_per_stage = {1};
  advpost::DetectorModel det(arch, advpost::LfccConfig{});
  advpost::GeneratorArch garch;
  garch.base_channels = 16;
  garch.dilations = {1};
  const std::vector<Waveform> corpus = {advpost::testing::RandomWaveform(4000, 1, 0.3)};
  advpost::TrainSchedule s;  // paper schedule
  s.batch_size = 1;
  s.crop_seconds = 0.1;
  const auto dir = advpost::testing::TempDir("lr");
  std::map<int64_t, double> logged;
  // Fast-forward by resuming from checkpoints stamped with the wanted step.
  for (int64_t start : {int64_t{0}, int64_t{4999}, int64_t{9999}, int64_t{29999}, int64_t{49999}}) {
    advpost::ResidualGenerator g(garch);
    advpost::RgnTrainOptions o;
    if (start > 0) {
      advpost::SaveGenerator(g, dir / "at.ckpt", {{"step", start}});
      o.resume_from = dir / "at.ckpt";
    }
    o.max_steps = start + 2;
    for (const auto& l : advpost::TrainRgn(g, det, corpus, s, o).log) logged[l.step] = l.lr;
  }
  const std::vector<std::pair<int64_t, double>> want = {{0, 1e-4},      {4999, 1e-4},     {5000, 5e-5},
                                                        {10000, 2.5e-5}, {30000, 1.25e-5}, {50000, 6.25e-6}};
  bool ok = true;
  std::string detail;
  for (const auto& [step, lr] : want) {
    const bool hit = logged.count(step) && logged[step] == lr;
    ok &= hit;
    detail += (detail.empty() ? "" : ", ") + std::to_string(step) + ":" +
              (logged.count(step) ? Fmt("%g", logged[step]) : std::string("missing"));
  }
  return {ok, detail};
}

// 11
Outcome AugmentContracts() {
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const double x = -10 + 1.5 * i;
    const auto w = advpost::testing::RandomWaveform(4000, 50 + i, 0.09);
    const auto back = advpost::ApplyGain(advpost::ApplyGain(w, x), -x);
    for (std::size_t k = 0; k < w.size(); ++k) worst = std::max(worst, double(std::abs(back.samples[k] - w.samples[k])));
  }
  const auto tone = advpost::testing::Tone(6000, 1.0, 0.5);
  const double atten = advpost::testing::ToneLevelDb(tone, 6000) -
                       advpost::testing::ToneLevelDb(advpost::ApplyDownsample(tone, 8000), 6000);
  const auto clip = advpost::MakeToyClip(advpost::ToyRole::kFake, advpost::ToyCorpusConfig{}, 11);
  const auto res = advpost::AugmentResources::Synthetic(11);
  const auto menu = advpost::DefaultAugmentMenu();
  bool same = true;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = advpost::AugmentRandom(clip, menu, seed, res);
    const auto b = advpost::AugmentRandom(clip, menu, seed, res);
    same &= a.menu_index == b.menu_index && a.output.samples == b.output.samples;
  }
  return {worst <= 1e-6 && atten >= 40 && same,
          "gain round trip " + Fmt("%.2g", worst) + ", 6 kHz attenuation " + Fmt("%.1f", atten) +
              " dB, augment_random " + (same ? "deterministic" : "NOT deterministic")};
}

}  // namespace

int main() {
  torch::set_num_threads(1);
  int failures = 0;
  auto report = [&](int n, const std::string& name, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << name << "): " << o.detail
              << std::endl;
    failures += !o.pass;
  };
  report(1, "loss identities", LossIdentities());
  report(2, "modification magnitude oracle", ModificationOracle());
  report(3, "gradient check", GradientCheck());
  report(4, "LFCC reference", LfccReference());
  report(5, "EER oracle", EerOracle());
  const auto constructed = DsrConstructed();
  std::cout << "running toy pipeline..." << std::endl;
  const auto toy = RunToyPipeline();
  const auto recount = DsrRecount(toy);
  report(6, "DSR identities", {constructed.pass && recount.pass, constructed.detail + "; " + recount.detail});
  report(7, "toy transfer", ToyTransfer(toy));
  report(8, "silence sparing", SilenceSparing(toy));
  report(9, "frozen adversary", FrozenDetector(toy));
  report(10, "learning-rate schedule", LearningRateLog());
  report(11, "augmentation contracts", AugmentContracts());
  std::cout << (failures ? std::to_string(failures) + " criterion(s) failed" : "all criteria passed")
            << std::endl;
  return failures ? 1 : 0;
}
